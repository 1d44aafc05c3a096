//! Library side of the `dw` binary: argument grammar, subcommands and
//! report types (re-exported so their JSON can be parsed back).

pub mod args;
pub mod commands;
pub mod output;
