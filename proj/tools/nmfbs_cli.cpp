#include "nmfbs/cli.hpp"

int main(int argc, char** argv) { return nmfbs::cli::run_cli(argc, argv); }
