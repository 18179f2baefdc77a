#include "qvdp/sweep.hpp"

int main(int argc, char** argv) { return qvdp::cli::run_cli(argc, argv); }
