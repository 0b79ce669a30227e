#include "hbq_cli/cli.hpp"

int main(int argc, char** argv) { return hbq::cli::run(argc, argv); }
