#include "smectic/cli.hpp"

int main(int argc, char** argv) { return smectic::cli::run(argc, argv); }
