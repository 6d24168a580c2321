#include "dgmd/cli.hpp"

int main(int argc, char** argv) { return dgmd::cli::run(argc, argv); }
