// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    let code = cavityq_cli::run(std::env::args_os());
    std::process::exit(code);
}
