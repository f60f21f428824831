//! Browser bindings for the demo page: three interactive operations over
//! gallery seeds — hypercohomology tables, Betti tables of Tate windows, and
//! Beilinson monads. Everything returns prerendered HTML/text so the page
//! stays framework-free.

use bgg_core::beilinson::{
    beilinson_linear_terms_from_tate, beilinson_omega_from_tate, required_window,
};
use bgg_core::cohomology::{cm_regularity, render_betti, sheaf_table};
use bgg_core::error::Error;
use bgg_core::exterior::Ctx;
use bgg_core::field::{PrimeField, DEFAULT_PRIME};
use bgg_core::gallery::gallery;
use bgg_core::module::LambdaModule;
use bgg_core::tate::tate_resolution;
use std::sync::Arc;
use wasm_bindgen::prelude::*;

fn seed(
    name: &str,
    n: usize,
    a: i32,
    m: i32,
    i: i32,
) -> Result<Arc<LambdaModule<PrimeField>>, Error> {
    if !(1..=6).contains(&n) {
        return Err(Error::Parse("n must be between 1 and 6".into()));
    }
    let ctx = Ctx::new(n, PrimeField::new(DEFAULT_PRIME));
    let a = Some(a as i64);
    let m = (m > 0).then_some(m as usize);
    let i = (i >= 0).then_some(i as usize);
    gallery(&ctx, name, a, m, i)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn table_to_html(rendered: &str) -> String {
    let mut html = String::from("<table>");
    for (k, line) in rendered.lines().enumerate() {
        html.push_str("<tr>");
        for cell in line.split('\t') {
            if k == 0 {
                html.push_str(&format!("<th>{}</th>", escape(cell)));
            } else {
                html.push_str(&format!("<td>{}</td>", escape(cell)));
            }
        }
        html.push_str("</tr>");
    }
    html.push_str("</table>");
    html
}

fn err_html(e: &Error) -> String {
    format!("<p class=\"error\">{}</p>", escape(&e.to_string()))
}

/// Hypercohomology table h^j(F(d)) of a gallery seed, as an HTML table plus
/// the Castelnuovo–Mumford regularity when the window certifies it.
#[wasm_bindgen]
pub fn demo_cohomology(
    name: &str,
    n: usize,
    a: i32,
    m: i32,
    i: i32,
    dmin: i32,
    dmax: i32,
) -> String {
    let run = || -> Result<String, Error> {
        if dmin > dmax || dmax - dmin > 40 {
            return Err(Error::Parse(
                "twist range must be nonempty and at most 40 wide".into(),
            ));
        }
        let s = seed(name, n, a, m, i)?;
        let table = sheaf_table(&s, (dmin as i64, dmax as i64))?;
        let mut html = table_to_html(&table.render());
        match cm_regularity(&table) {
            Ok(r) => html.push_str(&format!(
                "<p>Castelnuovo–Mumford regularity: <b>{r}</b></p>"
            )),
            Err(_) => html.push_str("<p>(widen the twist range to certify the regularity)</p>"),
        }
        Ok(html)
    };
    run().unwrap_or_else(|e| err_html(&e))
}

/// Betti table γ_{p,i} of a Tate resolution window, as HTML.
#[wasm_bindgen]
pub fn demo_betti(name: &str, n: usize, a: i32, m: i32, i: i32, wlo: i32, whi: i32) -> String {
    let run = || -> Result<String, Error> {
        if wlo > whi || whi - wlo > 24 {
            return Err(Error::Parse(
                "window must be nonempty and at most 24 wide".into(),
            ));
        }
        let s = seed(name, n, a, m, i)?;
        let core = bgg_core::module::split_free(&s).core;
        let t = tate_resolution(&core, (wlo as i64, whi as i64))?;
        Ok(table_to_html(&render_betti(&t, (wlo as i64, whi as i64))))
    };
    run().unwrap_or_else(|e| err_html(&e))
}

/// Beilinson monad of a gallery seed: both forms as preformatted text.
#[wasm_bindgen]
pub fn demo_beilinson(name: &str, n: usize, a: i32, m: i32, i: i32, with_blocks: bool) -> String {
    let run = || -> Result<String, Error> {
        let s = seed(name, n, a, m, i)?;
        let core = bgg_core::module::split_free(&s).core;
        let w = required_window(&core);
        let t = tate_resolution(&core, w)?;
        let monad = beilinson_omega_from_tate(&t)?;
        let lin = beilinson_linear_terms_from_tate(&t)?;
        let mut out = String::from("<h3>Ω-form</h3><pre>");
        out.push_str(&escape(&monad.render()));
        if with_blocks {
            out.push_str(&escape(&monad.render_blocks(&core.ctx().field)));
        }
        out.push_str("</pre><h3>linear form (terms)</h3><pre>");
        out.push_str(&escape(&lin.render()));
        out.push_str("</pre>");
        Ok(out)
    };
    run().unwrap_or_else(|e| err_html(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_table_contains_serre_values() {
        let html = demo_cohomology("twisted-structure", 2, 0, 0, -1, -5, 5);
        assert!(html.contains("<td>6</td>"), "h⁰(O(2)) = 6 in {html}");
        assert!(html.contains("regularity: <b>0</b>"));
    }

    #[test]
    fn demo_betti_matches_tate_example() {
        let html = demo_betti("underline-k", 2, 0, 0, -1, -2, 2);
        for v in ["<td>3</td>", "<td>6</td>", "<td>1</td>"] {
            assert!(html.contains(v), "{v} in {html}");
        }
    }

    #[test]
    fn demo_beilinson_of_o1() {
        let text = demo_beilinson("twisted-structure", 2, 1, 0, -1, true);
        assert!(text.contains("Ω^1(1)"));
        assert!(text.contains("Ω^0(0)^3"));
        assert!(text.contains("O(-2)"));
    }

    #[test]
    fn demo_errors_are_reported() {
        let text = demo_cohomology("nope", 2, 0, 0, -1, -2, 2);
        assert!(text.contains("error"));
        let text = demo_cohomology("underline-k", 2, 0, 0, -1, 5, -5);
        assert!(text.contains("error"));
    }
}
