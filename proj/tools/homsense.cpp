#include "homsense/cli.hpp"

int main(int argc, char** argv) { return homsense::cli::run(argc, argv); }
