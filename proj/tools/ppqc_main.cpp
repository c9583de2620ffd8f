#include "ppqc/cli.hpp"

int main(int argc, char** argv) { return ppqc::cli::cli_main(argc, argv); }
