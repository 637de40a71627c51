// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#include "squeezetrack/cli.hpp"

int main(int argc, char** argv) { return squeezetrack::cli::run_cli(argc, argv); }
