// stochtex is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <stochtex/cli.h>

#include <iostream>

int main(int argc, char **argv) {
    return stochtex::cli::run_cli(argc, argv, std::cout, std::cerr);
}
