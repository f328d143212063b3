// Copyright 2026 The chiraltrain Authors
// SPDX-License-Identifier: Apache-2.0

//! Bessel functions of the first kind at integer order.

const RESCALE_ABOVE: f64 = 1e250;

/// J_0(x) … J_{n_max}(x) by Miller's backward recurrence, normalized with
/// J_0 + 2·Σ J_{2k} = 1.
pub fn bessel_j_sequence(x: f64, n_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let sign_flip = x < 0.0;
    let ax = x.abs();

    // Start well above both the requested order and the argument.
    let reach = n_max.max(ax.ceil() as usize);
    let mut start = reach + 30 + (40.0 * reach as f64).sqrt() as usize;
    if start % 2 == 1 {
        start += 1;
    }

    let mut above = 0.0;
    let mut current = 1e-300;
    let mut even_sum = 0.0;
    let mut trial = vec![0.0; n_max + 1];
    for k in (0..=start).rev() {
        if k <= n_max {
            trial[k] = current;
        }
        if k % 2 == 0 && k > 0 {
            even_sum += current;
        }
        if k == 0 {
            break;
        }
        let below = 2.0 * k as f64 / ax * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE_ABOVE {
            current /= RESCALE_ABOVE;
            above /= RESCALE_ABOVE;
            even_sum /= RESCALE_ABOVE;
            for t in trial.iter_mut() {
                *t /= RESCALE_ABOVE;
            }
        }
    }
    let norm = trial[0] + 2.0 * even_sum;
    for (n, (o, t)) in out.iter_mut().zip(trial).enumerate() {
        *o = t / norm;
        if sign_flip && n % 2 == 1 {
            *o = -*o;
        }
    }
    out
}

/// J_n(x) for any integer n.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let k = n.unsigned_abs() as usize;
    let value = bessel_j_sequence(x, k)[k];
    if n < 0 && k % 2 == 1 {
        -value
    } else {
        value
    }
}

/// (n, J_n(A)) for n = −n_cut … n_cut.
pub fn bessel_weights(amplitude: f64, n_cut: u32) -> Vec<(i32, f64)> {
    let positive = bessel_j_sequence(amplitude, n_cut as usize);
    let n_cut = n_cut as i32;
    (-n_cut..=n_cut)
        .map(|n| {
            let k = n.unsigned_abs() as usize;
            let value = if n < 0 && k % 2 == 1 { -positive[k] } else { positive[k] };
            (n, value)
        })
        .collect()
}
