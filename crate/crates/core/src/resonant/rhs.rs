
use super::modes::ModeVector;
use super::sets::resonant_set;

/// Resonant nonlinearity, component `j` equal to
/// `Σ_{ℛ(j)} v_{j1} v̄_{j2} v_{j3} = 2 (Σ_k |v_k|²) v_j - |v_j|² v_j`,
/// evaluated pointwise in closed form.
pub fn resonant_rhs(v: &ModeVector) -> ModeVector {
    let s = v.density();
    let mut out = v.clone();
    for m in out.modes_mut() {
        for (x, s) in m.iter_mut().zip(&s) {
            *x *= 2.0 * s - x.norm_sqr();
        }
    }
    out
}

/// The same nonlinearity summed term by term over the enumerated resonant
/// triples.
pub fn resonant_rhs_bruteforce(v: &ModeVector) -> ModeVector {
    let mut out = ModeVector::zeros(v.grid(), v.jmax()).expect("jmax already validated");
    for j in v.indices() {
        let triples = resonant_set(j, v.jmax()).expect("j within range");
        let target = out.mode_mut(j);
        for t in triples {
            let (a, b, c) = (v.mode(t.j1), v.mode(t.j2), v.mode(t.j3));
            for (p, x) in target.iter_mut().enumerate() {
                *x += a[p] * b[p].conj() * c[p];
            }
        }
    }
    out
}
