// Copyright 2026 The fockgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Matrix permanents.

use alloc::vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Largest dimension accepted by [`permanent`].
pub const MAX_PERMANENT_DIM: usize = 12;

/// Largest dimension accepted by [`permanent_by_permutations`].
pub const MAX_REFERENCE_DIM: usize = 9;

fn check_square(m: &DMatrix<Complex64>, cap: usize) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() > cap {
        return Err(Error::PermanentTooLarge(m.nrows()));
    }
    Ok(m.nrows())
}

/// `Per(M) = Σ_σ Π_i M[i, σ(i)]` by Ryser's formula, visiting column
/// subsets in Gray-code order so each step updates the row sums with a
/// single column.
///
/// `Per(M) = (-1)^n Σ_{S ⊆ cols} (-1)^{|S|} Π_i Σ_{j ∈ S} M[i, j]`
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = check_square(m, MAX_PERMANENT_DIM)?;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray: u32 = 0;
    for k in 1u32..(1u32 << n) {
        let col = k.trailing_zeros() as usize;
        gray ^= 1 << col;
        if gray & (1 << col) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += m[(i, col)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= m[(i, col)];
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// Direct sum over all `n!` permutations. Reference implementation used to
/// cross-check [`permanent`].
pub fn permanent_by_permutations(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = check_square(m, MAX_REFERENCE_DIM)?;
    let mut used = vec![false; n];
    Ok(expand_row(m, 0, &mut used))
}

fn expand_row(m: &DMatrix<Complex64>, row: usize, used: &mut [bool]) -> Complex64 {
    if row == used.len() {
        return Complex64::new(1.0, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for col in 0..used.len() {
        if !used[col] {
            used[col] = true;
            acc += m[(row, col)] * expand_row(m, row + 1, used);
            used[col] = false;
        }
    }
    acc
}
