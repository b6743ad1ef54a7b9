// SPDX-License-Identifier: MIT OR Apache-2.0

//! Benchmark-only crate: see `benches/kernels.rs`. The library target
//! exists solely so the benches have a crate to live in; all measured code
//! is in `gelsim-core`.
