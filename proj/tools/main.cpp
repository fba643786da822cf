#include "edgeden/cli.hpp"

int main(int argc, char** argv) { return edgeden::run_cli(argc, argv); }
