// Copyright 2026 The nhqm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <cblas.h>
#include <lapacke.h>
