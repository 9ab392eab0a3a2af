// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
