#include "bmkit/cli.hpp"

int main(int argc, char** argv) { return bmkit::cli_main(argc, argv); }
