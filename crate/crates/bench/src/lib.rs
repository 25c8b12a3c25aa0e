//! Criterion benchmarks for the spectral, diffeomorphism and cocycle kernels.
//! Run with `cargo bench -p torext-bench`.
