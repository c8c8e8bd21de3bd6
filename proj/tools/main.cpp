// Copyright 2026 The asphase Authors
// SPDX-License-Identifier: Apache-2.0

#include "asphase/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return asphase::cli::run_cli(argc, argv, std::cout, std::cerr); }
