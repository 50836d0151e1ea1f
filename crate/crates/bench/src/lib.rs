// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! Benchmarks live under `benches/`.
