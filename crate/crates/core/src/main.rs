// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(chiraltrain::io::cli::main_with_args(std::env::args_os()));
}
