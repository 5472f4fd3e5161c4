use std::sync::Arc;

use crate::algebra::{AlgebraElement, FreeExtension};
use crate::error::{Error, Result};
use crate::norms::spectral_value_of;
use crate::ring::{FieldEmbedding, LogNorm, Poly};

/// Generators `y_ij − c_j(r_i·X)` for a block of coordinates, with the
/// radius data of the `y` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscBlock {
    /// Coordinates `x_1, …, x_n` of `X = Σ x_m e_m`.
    pub x_block: Vec<String>,
    /// `y_ij` in order `i` major, `j = 1..n`.
    pub y_variables: Vec<String>,
    pub generators: Vec<Poly>,
    /// Log-radii on the adic side: every `y_ij` is integral.
    pub adic_radii: Vec<LogNorm>,
    /// Log-radii `j·(s + ρ(r_i))` when the block carries a disc radius `s`.
    pub berkovich_radii: Option<Vec<LogNorm>>,
}

impl DiscBlock {
    pub(crate) fn rename(&self, f: impl Fn(&str) -> String) -> DiscBlock {
        DiscBlock {
            x_block: self.x_block.iter().map(|v| f(v)).collect(),
            y_variables: self.y_variables.iter().map(|v| f(v)).collect(),
            generators: self.generators.iter().map(|g| g.rename(&f)).collect(),
            adic_radii: self.adic_radii.clone(),
            berkovich_radii: self.berkovich_radii.clone(),
        }
    }

    pub(crate) fn base_change(&self, embed: &FieldEmbedding) -> DiscBlock {
        DiscBlock { generators: self.generators.iter().map(|g| embed.apply_poly(g)).collect(), ..self.clone() }
    }
}

/// `y_ij − c_j(r_i·X)` for radius elements `r_1, …, r_k` of `ext`, where
/// `X = Σ block_m e_m` and `χ(z) = z^n + c_1 z^(n−1) + … + c_n`. The `y`
/// variables are named `{y_prefix}{i}_{j}`.
pub fn disc_generators(
    ext: &Arc<FreeExtension>,
    radii: &[AlgebraElement],
    block: &[String],
    y_prefix: &str,
) -> Result<DiscBlock> {
    disc_generators_with_radius(ext, radii, block, y_prefix, None)
}

/// As [`disc_generators`], additionally recording Berkovich log-radii for a
/// disc of log-radius `s` in the `X` coordinates.
pub fn disc_generators_with_radius(
    ext: &Arc<FreeExtension>,
    radii: &[AlgebraElement],
    block: &[String],
    y_prefix: &str,
    s: Option<LogNorm>,
) -> Result<DiscBlock> {
    let n = ext.rank();
    if block.len() != n {
        return Err(Error::invalid(format!("block has {} names for rank {n}", block.len())));
    }
    let base = ext.base();
    let x = block.iter().enumerate().fold(ext.zero(), |acc, (m, v)| acc.add(&ext.basis(m).scale(&Poly::var(base, v))));
    let mut out = DiscBlock {
        x_block: block.to_vec(),
        y_variables: Vec::new(),
        generators: Vec::new(),
        adic_radii: Vec::new(),
        berkovich_radii: s.as_ref().map(|_| Vec::new()),
    };
    for (i, r) in radii.iter().enumerate() {
        if r.ext() != ext {
            return Err(Error::invalid(format!("radius element {r} does not lie in the extension")));
        }
        let cs = r.mul(&x).charpoly_coefficients();
        let rho = match &s {
            None => None,
            Some(_) if r == &ext.one() => Some(LogNorm::zero()),
            Some(_) => Some(spectral_value_of(base, &r.charpoly_coefficients())?),
        };
        for (j, c) in cs.iter().enumerate() {
            let y = format!("{y_prefix}{}_{}", i + 1, j + 1);
            out.generators.push(&Poly::var(base, &y) - c);
            out.y_variables.push(y);
            out.adic_radii.push(LogNorm::zero());
            if let (Some(b), Some(s), Some(rho)) = (out.berkovich_radii.as_mut(), &s, &rho) {
                b.push((s.clone() + rho.clone()).mul_int(j as u64 + 1));
            }
        }
    }
    Ok(out)
}
