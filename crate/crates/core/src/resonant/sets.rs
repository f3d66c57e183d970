use crate::error::{Error, Result};

/// Index triple `(j1, j2, j3)` with `j1 - j2 + j3 = j` for an owning index `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResonantTriple {
    pub j1: i64,
    pub j2: i64,
    pub j3: i64,
}

impl ResonantTriple {
    pub fn new(j1: i64, j2: i64, j3: i64) -> Self {
        Self { j1, j2, j3 }
    }

    /// `j1² - j2² + j3² - j²` for `j = j1 - j2 + j3`.
    pub fn phase_mismatch(&self) -> i64 {
        let j = self.j1 - self.j2 + self.j3;
        self.j1 * self.j1 - self.j2 * self.j2 + self.j3 * self.j3 - j * j
    }
}

fn check(j: i64, jmax: usize) -> Result<()> {
    if j.unsigned_abs() as usize > jmax {
        return Err(Error::usage(format!("|j| = {} exceeds jmax = {jmax}", j.abs())));
    }
    Ok(())
}

/// All convolution triples in `[-jmax, jmax]³` with `j1 - j2 + j3 = j`,
/// in lexicographic order.
fn convolution_triples(j: i64, jmax: usize) -> impl Iterator<Item = ResonantTriple> {
    let m = jmax as i64;
    (-m..=m).flat_map(move |j1| {
        (-m..=m).filter_map(move |j2| {
            let j3 = j - j1 + j2;
            (j3.abs() <= m).then_some(ResonantTriple::new(j1, j2, j3))
        })
    })
}

/// Brute-force enumeration of the resonant set of `j`.
pub fn resonant_set(j: i64, jmax: usize) -> Result<Vec<ResonantTriple>> {
    check(j, jmax)?;
    Ok(convolution_triples(j, jmax).filter(|t| t.phase_mismatch() == 0).collect())
}

/// Brute-force enumeration of the non-resonant convolution triples of `j`.
pub fn nonresonant_set(j: i64, jmax: usize) -> Result<Vec<ResonantTriple>> {
    check(j, jmax)?;
    Ok(convolution_triples(j, jmax).filter(|t| t.phase_mismatch() != 0).collect())
}

/// Non-resonant triples with entries in `[-jmax, jmax]` for every output
/// index they produce, grouped by output index `j ∈ [-3 jmax, 3 jmax]`.
pub(crate) fn nonresonant_by_output(jmax: usize) -> Vec<(i64, Vec<ResonantTriple>)> {
    let m = jmax as i64;
    let mut out: Vec<(i64, Vec<ResonantTriple>)> = (-3 * m..=3 * m).map(|j| (j, Vec::new())).collect();
    for j1 in -m..=m {
        for j2 in -m..=m {
            for j3 in -m..=m {
                let t = ResonantTriple::new(j1, j2, j3);
                if t.phase_mismatch() != 0 {
                    let j = j1 - j2 + j3;
                    out[(j + 3 * m) as usize].1.push(t);
                }
            }
        }
    }
    out.retain(|(_, v)| !v.is_empty());
    out
}
