#include "rclab/cli.hpp"

int main(int argc, char** argv) { return rclab::cli::main(argc, argv); }
