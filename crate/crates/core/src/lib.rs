//! Frank-Wolfe with open-loop momentum (AFW), plain Frank-Wolfe and
//! accelerated-gradient baselines, over vector norm balls and the nuclear-norm
//! ball, with estimate-sequence diagnostics and trace I/O.
//!
//! Start from the runnable programs in `examples/`.

pub mod data_io;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod matrix;
pub mod objectives;
pub mod sets;
pub mod solvers;
pub mod space;
