//! Length functions of representations on word balls.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::classify::Representation;
use crate::error::{Error, Result};
use crate::matrix::Sl2Matrix;
use crate::traces::FundamentalTraceVector;
use crate::words::{alphabet, ball_size, Presentation, Word};

/// Default limit on the number of words in a spectrum.
pub const DEFAULT_MAX_WORDS: usize = 200_000;

/// `ℓ(g) = -2 min(0, v(tr g))`.
fn length_of_matrix(g: &Sl2Matrix) -> u64 {
    (-2 * g.trace().loc_min()) as u64
}

pub fn length_of(rep: &Representation, w: &Word) -> Result<u64> {
    Ok(length_of_matrix(&rep.evaluate(w)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthSpectrum {
    presentation: Presentation,
    prime: u64,
    max_len: usize,
    entries: Vec<(Word, u64)>,
    fingerprint: FundamentalTraceVector,
}

impl LengthSpectrum {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn entries(&self) -> &[(Word, u64)] {
        &self.entries
    }

    pub fn fingerprint(&self) -> &FundamentalTraceVector {
        &self.fingerprint
    }

    pub fn get(&self, w: &Word) -> Option<u64> {
        self.entries
            .binary_search_by(|(x, _)| x.cmp(w))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# presentation: {}", self.presentation.describe());
        let _ = writeln!(out, "# prime: {}", self.prime);
        let _ = writeln!(out, "# max_len: {}", self.max_len);
        for (name, value) in self.fingerprint.to_lines() {
            let _ = writeln!(out, "# fingerprint.{name}={value}");
        }
        out.push_str("word\tlength\n");
        for (w, l) in &self.entries {
            let _ = writeln!(out, "{}\t{l}", self.presentation.format_word(w));
        }
        out
    }
}

/// Lengths of every freely reduced word of length at most `max_len`, in
/// shortlex order. Each level is computed in parallel from the previous
/// level's matrices.
pub fn spectrum(rep: &Representation, max_len: usize, max_words: usize) -> Result<LengthSpectrum> {
    let rank = rep.rank();
    let size = ball_size(rank, max_len);
    if size > max_words as u128 {
        return Err(Error::CapExceeded(format!(
            "ball of radius {max_len} has {size} words, limit is {max_words}"
        )));
    }
    let letters = alphabet(rank);
    let letter_mats: Vec<Sl2Matrix> = letters
        .iter()
        .map(|l| {
            let g = &rep.assignment()[l.generator];
            if l.inverse {
                g.inverse()
            } else {
                g.clone()
            }
        })
        .collect();

    let mut entries = Vec::with_capacity(size as usize);
    entries.push((Word::empty(), 0));
    let mut level = vec![(Word::empty(), Sl2Matrix::identity(rep.context()))];
    for _ in 0..max_len {
        level = level
            .par_iter()
            .flat_map_iter(|(w, m)| {
                letters
                    .iter()
                    .zip(&letter_mats)
                    .filter(move |(l, _)| w.letters().last().is_none_or(|last| !last.cancels(**l)))
                    .map(move |(l, g)| {
                        let mut v = w.clone();
                        v.push(*l);
                        (v, m * g)
                    })
            })
            .collect();
        entries.par_extend(
            level
                .par_iter()
                .map(|(w, m)| (w.clone(), length_of_matrix(m))),
        );
    }

    Ok(LengthSpectrum {
        presentation: rep.presentation().clone(),
        prime: rep.context().p(),
        max_len,
        entries,
        fingerprint: rep.fundamental_traces(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumComparison {
    /// `(word, first value, second value)` where they differ.
    pub differences: Vec<(Word, u64, u64)>,
    pub fingerprints_equal: bool,
}

impl SpectrumComparison {
    pub fn identical(&self) -> bool {
        self.differences.is_empty()
    }
}

pub fn compare_spectra(s1: &LengthSpectrum, s2: &LengthSpectrum) -> Result<SpectrumComparison> {
    if s1.presentation != s2.presentation || s1.max_len != s2.max_len || s1.prime != s2.prime {
        return Err(Error::ShapeMismatch(format!(
            "{} at length {} over p={} vs {} at length {} over p={}",
            s1.presentation.describe(),
            s1.max_len,
            s1.prime,
            s2.presentation.describe(),
            s2.max_len,
            s2.prime
        )));
    }
    let differences = s1
        .entries
        .iter()
        .zip(&s2.entries)
        .filter(|((_, a), (_, b))| a != b)
        .map(|((w, a), (_, b))| (w.clone(), *a, *b))
        .collect();
    Ok(SpectrumComparison {
        differences,
        fingerprints_equal: s1.fingerprint == s2.fingerprint,
    })
}
