//! Named module builders: the seeds used by the CLI and the verification
//! suites.

use crate::complex::builders::{omega, truncated};
use crate::error::{Error, Result};
use crate::exterior::Ctx;
use crate::field::Field;
use crate::module::{split_free, underline_k, LambdaModule};
use crate::tate::tate_resolution;
use std::sync::Arc;

/// A socle-annihilated module whose L-image has the hypercohomology table of
/// O(a) at index 0: for a = 0 this is underline k; otherwise the corner Z^a
/// of the Tate resolution of k(−a) (L(T^{−a}Z^a) ≃ L(I•) ≃ O(a) shifted back
/// by the corner index).
pub fn twisted_structure<F: Field>(ctx: &Ctx<F>, a: i64) -> Result<Arc<LambdaModule<F>>> {
    if a == 0 {
        return Ok(Arc::new(underline_k(ctx, 0)));
    }
    let seed = Arc::new(underline_k(ctx, -a));
    let window = (a.min(0) - 1, a.max(0) + 1);
    let t = tate_resolution(&seed, window)?;
    let z = t.corner(a)?;
    Ok(split_free(&z).core)
}

/// Gallery dispatch: `underline-k {a}`, `twisted-structure {a}`,
/// `truncated {m} {a}`, `omega {i}`.
pub fn gallery<F: Field>(
    ctx: &Ctx<F>,
    name: &str,
    a: Option<i64>,
    m: Option<usize>,
    i: Option<usize>,
) -> Result<Arc<LambdaModule<F>>> {
    match name {
        "underline-k" | "k" => Ok(Arc::new(underline_k(ctx, a.unwrap_or(0)))),
        "twisted-structure" | "o" => twisted_structure(ctx, a.unwrap_or(0)),
        "truncated" => {
            let m = m.ok_or_else(|| Error::Parse("truncated needs --m".into()))?;
            if m == 0 {
                return Err(Error::Parse("truncated needs m ≥ 1".into()));
            }
            Ok(Arc::new(truncated(ctx, m, a.unwrap_or(0))))
        }
        "omega" => {
            let i = i.ok_or_else(|| Error::Parse("omega needs --i".into()))?;
            if i > ctx.n() {
                return Err(Error::Parse(format!(
                    "omega index {i} out of range 0..{}",
                    ctx.n()
                )));
            }
            Ok(Arc::new(omega(ctx, i)))
        }
        other => Err(Error::Parse(format!("unknown gallery builder {other:?}"))),
    }
}
