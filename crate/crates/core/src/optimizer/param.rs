// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Isometries as the first `n` columns of `exp(iH)`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::StinespringTensor;
use crate::error::{Error, Result};
use crate::linalg::{unitary_exp, ComplexMatrix};

/// Number of real parameters of a Hermitian generator on A⊗B⊗C,
/// `(n²·dim_c)²`.
pub fn param_count(n: usize, dim_c: usize) -> usize {
    let d = n * n * dim_c;
    d * d
}

/// Hermitian `D × D` generator: the first `D` parameters fill the
/// diagonal, then `(re, im)` pairs fill the strict upper triangle row by
/// row.
pub fn hermitian_generator(params: &[f64], d: usize) -> Result<ComplexMatrix> {
    if params.len() != d * d {
        return Err(Error::ParameterCount { expected: d * d, found: params.len() });
    }
    let mut h = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        h[(j, j)] = Complex64::new(params[j], 0.0);
    }
    let mut next = d;
    for j in 0..d {
        for k in j + 1..d {
            let z = Complex64::new(params[next], params[next + 1]);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
            next += 2;
        }
    }
    Ok(h)
}

/// The tensor whose `p`-th slice is column `p` of `exp(iH(params))`.
pub fn parametrize_isometry(params: &[f64], n: usize, dim_c: usize) -> Result<StinespringTensor> {
    if n == 0 || dim_c == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let d = n * n * dim_c;
    let h = hermitian_generator(params, d)?;
    let u = unitary_exp(&h);
    StinespringTensor::from_isometry(n, dim_c, &u.columns(0, n).into_owned())
}

/// Standard-normal generator parameters.
pub fn random_params(n: usize, dim_c: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..param_count(n, dim_c)).map(|_| StandardNormal.sample(rng)).collect()
}

/// A random parametrized isometry, deterministic in `seed`.
pub fn random_isometry(n: usize, dim_c: usize, seed: u64) -> Result<StinespringTensor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    parametrize_isometry(&random_params(n, dim_c, &mut rng), n, dim_c)
}
