#include "cli.hpp"

int main(int argc, char** argv) { return mixlab::lab::run(argc, argv); }
