// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Usage = 1,
    Parse = 2,
    Numeric = 3,
    Capacity = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { exit: Exit::Usage, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self { exit: Exit::Parse, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<cavityq::Error> for CliError {
    fn from(e: cavityq::Error) -> Self {
        let exit = if e.is_capacity() {
            Exit::Capacity
        } else if e.is_numeric() {
            Exit::Numeric
        } else {
            // Shape, index and argument errors all trace back to the input.
            Exit::Parse
        };
        Self { exit, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
