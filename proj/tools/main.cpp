#include "mahler/cli.hpp"

int main(int argc, char** argv) { return mahler::run(argc, argv); }
