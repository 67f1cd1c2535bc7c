//! Criterion benchmarks for the kernel and the number systems; see `benches/`.
