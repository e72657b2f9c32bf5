#include "cli.hpp"

int main(int argc, char** argv) { return wproj::cli::run(argc, argv); }
