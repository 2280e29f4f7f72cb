//! Batch sweeps over families of forms, links and triangulations.
//!
//! Every sweep takes an [`ExecMode`]. With the `parallel` feature the
//! parallel mode uses rayon; without it both modes run sequentially.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::interval::{certify_with, Certificate, CertifyOptions, PipelineError};
use crate::surgery::{matignon_family, SurgeryError};
use crate::tangle::{
    cosmetic_band_partner, eval_conway, is_unlinking_number_one, normalize_two_bridge, verify_chirally_cosmetic,
    ConwayForm,
};
use crate::tri::Triangulation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

pub fn map_items<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// All forms `(a_0, ..., a_k, +-2, -a_k, ..., -a_0)` with `k < max_flank`
/// and flanking entries drawn from `values`, including the bare `[+-2]`.
pub fn antisymmetric_palindromes(max_flank: usize, values: &[i64]) -> Vec<ConwayForm> {
    let mut out = Vec::new();
    let mut flanks: Vec<Vec<i64>> = vec![Vec::new()];
    for len in 0..=max_flank {
        if len > 0 {
            flanks = flanks
                .iter()
                .flat_map(|f| {
                    values.iter().map(move |&v| {
                        let mut g = f.clone();
                        g.push(v);
                        g
                    })
                })
                .collect();
        }
        for flank in &flanks {
            for mid in [2, -2] {
                let mut e = flank.clone();
                e.push(mid);
                e.extend(flank.iter().rev().map(|a| -a));
                out.push(ConwayForm::new(e).expect("entries are nonzero"));
            }
        }
    }
    out
}

/// The flanking values used by the exhaustive palindrome suite.
pub const PALINDROME_VALUES: [i64; 8] = [-4, -3, -2, -1, 1, 2, 3, 4];

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PalindromeSummary {
    pub checked: usize,
    pub numerator_failures: Vec<ConwayForm>,
    pub cosmetic_failures: Vec<ConwayForm>,
    /// Forms evaluating to `0/1`, the two-component unlink (`n = 0`).
    pub unlink_count: usize,
}

impl PalindromeSummary {
    pub fn all_pass(&self) -> bool {
        self.numerator_failures.is_empty() && self.cosmetic_failures.is_empty()
    }
}

/// `|p| = 2 n^2` for some integer `n >= 0`.
fn is_twice_square(p: &BigInt) -> bool {
    let p = p.abs();
    if p.is_odd() {
        return false;
    }
    let half: BigInt = p / 2;
    let r = half.sqrt();
    &r * &r == half
}

pub fn palindrome_sweep(mode: ExecMode, forms: &[ConwayForm]) -> PalindromeSummary {
    let results = map_items(mode, forms, |cf| {
        let value = eval_conway(cf);
        let numerator_ok = is_twice_square(value.numer());
        if value.numer().is_zero() {
            // The unlink has no Schubert normal form but is its own mirror,
            // so the partner must evaluate to 0/1 as well.
            let partner_zero = cosmetic_band_partner(cf)
                .map(|p| eval_conway(&p).numer().is_zero())
                .unwrap_or(false);
            return (numerator_ok, partner_zero, true);
        }
        let cosmetic_ok = matches!(verify_chirally_cosmetic(cf), Ok(true));
        (numerator_ok, cosmetic_ok, false)
    });
    let mut summary = PalindromeSummary {
        checked: forms.len(),
        ..Default::default()
    };
    for (cf, (num, cos, unlink)) in forms.iter().zip(results) {
        summary.unlink_count += usize::from(unlink);
        if !num {
            summary.numerator_failures.push(cf.clone());
        }
        if !cos {
            summary.cosmetic_failures.push(cf.clone());
        }
    }
    summary
}

/// A link `S(2n^2, 2nm + sign)` from Kohn's list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KohnCase {
    pub n: i64,
    pub m: i64,
    pub sign: i64,
}

impl KohnCase {
    pub fn p(&self) -> i64 {
        2 * self.n * self.n
    }

    pub fn q(&self) -> i64 {
        2 * self.n * self.m + self.sign
    }
}

/// Coprime `(n, m)` with `1 <= m <= n <= max_n` and `0 < 2nm +- 1 < 2n^2`.
pub fn kohn_cases(max_n: i64) -> Vec<KohnCase> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n {
            if n.gcd(&m) != 1 {
                continue;
            }
            for sign in [1, -1] {
                let c = KohnCase { n, m, sign };
                if 0 < c.q() && c.q() < c.p() {
                    out.push(c);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct KohnSummary {
    pub checked: usize,
    pub failures: Vec<KohnCase>,
}

pub fn kohn_sweep(mode: ExecMode, cases: &[KohnCase]) -> KohnSummary {
    let found = map_items(mode, cases, |c| {
        normalize_two_bridge(c.p(), c.q())
            .ok()
            .and_then(|tb| is_unlinking_number_one(&tb).ok().flatten())
            .is_some()
    });
    KohnSummary {
        checked: cases.len(),
        failures: cases
            .iter()
            .zip(found)
            .filter(|(_, ok)| !ok)
            .map(|(c, _)| *c)
            .collect(),
    }
}

/// Coprime `(m, n)` with `n >= 1` and `2n <= m <= max_m`.
pub fn matignon_pairs(max_m: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for m in 2..=max_m {
        for n in 1..=m / 2 {
            if m.gcd(&n) == 1 {
                out.push((m, n));
            }
        }
    }
    out
}

pub fn matignon_sweep(
    mode: ExecMode,
    pairs: &[(i64, i64)],
) -> Vec<((i64, i64), Result<(), SurgeryError>)> {
    let results = map_items(mode, pairs, |&(m, n)| matignon_family(m, n).map(|_| ()));
    pairs.iter().copied().zip(results).collect()
}

pub fn certify_batch(
    mode: ExecMode,
    triangulations: &[Triangulation],
    opts: &CertifyOptions,
) -> Vec<Result<Certificate, PipelineError>> {
    map_items(mode, triangulations, |t| certify_with(t, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palindrome_enumeration_counts() {
        // 2 * (1 + 8 + 64) forms with at most two flanking entries.
        let forms = antisymmetric_palindromes(2, &PALINDROME_VALUES);
        assert_eq!(forms.len(), 146);
        assert!(forms.iter().any(|f| f.entries() == [3, 2, -3]));
        assert!(forms.iter().any(|f| f.entries() == [-2]));
    }

    #[test]
    fn small_sweeps_agree_across_modes() {
        let forms = antisymmetric_palindromes(2, &PALINDROME_VALUES);
        let a = palindrome_sweep(ExecMode::Sequential, &forms);
        let b = palindrome_sweep(ExecMode::Parallel, &forms);
        assert!(a.all_pass());
        assert_eq!(a.unlink_count, 4);
        assert_eq!(a.checked, b.checked);
        assert_eq!(a.numerator_failures, b.numerator_failures);

        let cases = kohn_cases(4);
        assert!(kohn_sweep(ExecMode::Sequential, &cases).failures.is_empty());
        assert!(kohn_sweep(ExecMode::Parallel, &cases).failures.is_empty());
    }

    #[test]
    fn kohn_case_bounds() {
        for c in kohn_cases(6) {
            assert!(c.q() > 0 && c.q() < c.p());
            assert_eq!(c.n.gcd(&c.m), 1);
        }
        assert!(kohn_cases(3).contains(&KohnCase { n: 3, m: 1, sign: -1 }));
    }

    #[test]
    fn twice_square_detection() {
        assert!(is_twice_square(&BigInt::from(18)));
        assert!(is_twice_square(&BigInt::from(-50)));
        assert!(!is_twice_square(&BigInt::from(12)));
        assert!(is_twice_square(&BigInt::from(0)));
        assert!(!is_twice_square(&BigInt::from(9)));
    }
}
