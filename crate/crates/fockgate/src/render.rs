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

//! Number formatting shared by every output format.
//!
//! Values are rounded to 12 significant digits. When a value is within
//! 1e-12 of a small rational `p/q` (or its square is), the exact form is
//! offered as an annotation.

use fockgate_core::{Complex64, EPS, PRUNE_THRESHOLD};
use serde_json::{json, Value};

const MAX_DENOMINATOR: i64 = 64;

/// Rounds to 12 significant digits; magnitudes below the prune threshold
/// become exactly zero.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x.abs() < PRUNE_THRESHOLD {
        return 0.0;
    }
    format!("{x:.11e}").parse::<f64>().unwrap_or(x) + 0.0
}

pub fn number(x: f64) -> String {
    format!("{}", sig12(x))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn rational(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e6 {
        return None;
    }
    (1..=MAX_DENOMINATOR).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() < EPS).then(|| {
            let p = p as i64;
            let g = gcd(p, q).max(1);
            (p / g, q / g)
        })
    })
}

fn fraction(p: i64, q: i64) -> String {
    if q == 1 { format!("{p}") } else { format!("{p}/{q}") }
}

/// Exact form such as `1/9`, `-1/3` or `√(2/3)`, when one is close enough.
pub fn exact(x: f64) -> Option<String> {
    if let Some((p, q)) = rational(x) {
        return Some(fraction(p, q));
    }
    let (p, q) = rational(x * x)?;
    let sign = if x < 0.0 { "-" } else { "" };
    Some(if q == 1 {
        format!("{sign}√{p}")
    } else {
        format!("{sign}√({})", fraction(p, q))
    })
}

pub fn exact_complex(z: Complex64) -> Option<String> {
    let re_zero = sig12(z.re) == 0.0;
    let im_zero = sig12(z.im) == 0.0;
    match (re_zero, im_zero) {
        (_, true) => exact(z.re),
        (true, false) => exact(z.im).map(|e| imaginary(&e)),
        (false, false) => {
            let re = exact(z.re)?;
            let im = exact(z.im.abs())?;
            let sign = if z.im < 0.0 { '-' } else { '+' };
            Some(format!("{re}{sign}{}", imaginary(&im)))
        }
    }
}

fn imaginary(e: &str) -> String {
    match e {
        "1" => "i".into(),
        "-1" => "-i".into(),
        _ if e.contains('/') || e.contains('√') => match e.strip_prefix('-') {
            Some(rest) => format!("-({rest})i"),
            None => format!("({e})i"),
        },
        _ => format!("{e}i"),
    }
}

/// `0.111111111111 (1/9)` for human-readable tables.
pub fn annotated(x: f64) -> String {
    match exact(x) {
        Some(e) if e != number(x) => format!("{} ({e})", number(x)),
        _ => number(x),
    }
}

pub fn annotated_complex(z: Complex64) -> String {
    let (re, im) = (sig12(z.re), sig12(z.im));
    let body = if im == 0.0 {
        number(re)
    } else if re == 0.0 {
        format!("{}i", number(im))
    } else {
        format!("{}{}{}i", number(re), if im < 0.0 { '-' } else { '+' }, number(im.abs()))
    };
    match exact_complex(z) {
        Some(e) if e != body => format!("{body} ({e})"),
        _ => body,
    }
}

pub fn json_real(x: f64) -> Value {
    json!({ "value": sig12(x), "exact": exact(x) })
}

pub fn json_complex(z: Complex64) -> Value {
    json!({ "re": sig12(z.re), "im": sig12(z.im), "exact": exact_complex(z) })
}
