use crate::spectral::{modulate_x, translate_x, Field};

/// Result of [`galilean_boost`].
#[derive(Clone, Debug)]
pub struct Boosted {
    pub field: Field,
    /// `true` when `ξ` is not a multiple of the lattice spacing, in which
    /// case the modulation is not periodic on the box.
    pub approximate: bool,
}

/// `u ↦ e^{ix·ξ - it|ξ|²} u(x - 2tξ, y)`, mapping solutions at time `t`
/// to solutions at time `t`.
pub fn galilean_boost(u: &Field, xi: [f64; 2], t: f64) -> Boosted {
    let dk = u.grid().dk();
    let on_lattice = xi.iter().all(|x| {
        let m = x / dk;
        (m - m.round()).abs() < 1e-9
    });
    let shifted = translate_x(u, [2.0 * t * xi[0], 2.0 * t * xi[1]]);
    let phase = num_complex::Complex64::from_polar(1.0, -t * (xi[0] * xi[0] + xi[1] * xi[1]));
    Boosted {
        field: modulate_x(&shifted, xi).scaled(phase),
        approximate: !on_lattice,
    }
}
