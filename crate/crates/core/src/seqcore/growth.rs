//! Per-step growth checks for reversed sequences.
//!
//! In a reversed sequence `a_i` divides `a_(i+1) + a_(i+2)` and the quotient
//! is even. When the step is monotone (`a_(i+1) + a_(i+2) > 2 a_i`) the
//! quotient is therefore at least 4, which is the inequality that bounds
//! monotone growth below by the positive root of `r^2 + r - 4`.

use serde::{Deserialize, Serialize};

use crate::arith::{Natural, OddPrime};

use super::SeqError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleCheck {
    /// 0-based index of `a_i`.
    pub index: usize,
    pub sum: Natural,
    /// `a_(i+1) + a_(i+2) > 2 a_i`.
    pub premise: bool,
    /// `sum / a_i` when it divides exactly.
    pub quotient: Option<Natural>,
    /// The premise fails, or the quotient is an even integer ≥ 4.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub triples: Vec<TripleCheck>,
    /// Most terms in a strictly increasing stretch.
    pub longest_monotone_run: usize,
    /// `a_(i+1) / a_i` for each consecutive pair.
    pub growth_ratios: Vec<f64>,
    pub alpha: f64,
}

impl GrowthReport {
    pub fn all_hold(&self) -> bool {
        self.triples.iter().all(|t| t.holds)
    }
}

/// Positive root of `r^2 + r - 4 = 0`.
pub fn growth_root() -> f64 {
    (17f64.sqrt() - 1.0) / 2.0
}

pub fn growth_diagnostics(terms: &[OddPrime]) -> Result<GrowthReport, SeqError> {
    if terms.len() < 3 {
        return Err(SeqError::NotEnoughTerms {
            needed: 3,
            got: terms.len(),
        });
    }
    let four = Natural::from(4u64);
    let triples = terms
        .windows(3)
        .enumerate()
        .map(|(index, w)| {
            let a = w[0].value();
            let sum = w[1].value() + w[2].value();
            let premise = sum > a * 2u64;
            let (q, rem) = sum.div_rem(a);
            let quotient = rem.is_zero().then_some(q);
            let holds = !premise || quotient.as_ref().is_some_and(|q| q.is_even() && q >= &four);
            TripleCheck {
                index,
                sum,
                premise,
                quotient,
                holds,
            }
        })
        .collect();

    let mut longest = 1;
    let mut run = 1;
    for w in terms.windows(2) {
        run = if w[1].value() > w[0].value() {
            run + 1
        } else {
            1
        };
        longest = longest.max(run);
    }
    let growth_ratios = terms
        .windows(2)
        .map(|w| w[1].value().to_f64() / w[0].value().to_f64())
        .collect();

    Ok(GrowthReport {
        triples,
        longest_monotone_run: longest,
        growth_ratios,
        alpha: growth_root(),
    })
}
