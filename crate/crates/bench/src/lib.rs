//! Criterion benchmarks for nodal counting, contour extraction and spectra.
//! Run with `cargo bench -p nodal-bench`.
