//! `bgg`: exact BGG / Tate resolution toolkit on the command line.
//!
//! Exit codes: 0 success; 1 mathematical precondition violation (seed not
//! socle-annihilated, window not certifiable, failed verification); 2 parse
//! or I/O errors. All diagnostics go to stderr; output is deterministic
//! given (inputs, characteristic, seed).

use bgg_core::beilinson::{
    beilinson_linear_terms_from_tate, beilinson_omega_from_tate, required_window,
};
use bgg_core::bgg::l_module;
use bgg_core::cohomology::{
    cm_regularity, cohomology_table, euler_identity, hom_derived_dim, multiplication_map,
    render_betti, sheaf_table, strand_anticommutes,
};
use bgg_core::error::Error;
use bgg_core::exterior::Ctx;
use bgg_core::field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
use bgg_core::gallery::gallery;
use bgg_core::io::{module_char, read_module, write_module};
use bgg_core::matrix;
use bgg_core::module::{split_free, underline_k, LambdaModule};
use bgg_core::oracle::{bott_dims, p1_hyper, serre_dims, P1Cohomology};
use bgg_core::random::{random_module, random_seed, rng};
use bgg_core::tate::tate_resolution;
use clap::{Args, Parser, Subcommand};
use std::io::Write as _;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "bgg",
    version,
    about = "Tate resolutions, sheaf cohomology tables and Beilinson monads over exterior algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldOpt {
    /// Field characteristic (a prime < 2^31, or 0 for exact rationals)
    #[arg(long, default_value_t = DEFAULT_PRIME as u64)]
    char: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Write a gallery module file
    Gallery {
        /// underline-k | twisted-structure | truncated | omega
        #[arg(long)]
        name: String,
        /// Projective space dimension n (dim V = n+1)
        #[arg(long)]
        n: usize,
        /// Twist parameter a
        #[arg(long, allow_negative_numbers = true)]
        a: Option<i64>,
        /// Truncation order m (for `truncated`)
        #[arg(long)]
        m: Option<usize>,
        /// Form degree i (for `omega`)
        #[arg(long)]
        i: Option<usize>,
        #[command(flatten)]
        field: FieldOpt,
        /// Output path (stdout when omitted)
        #[arg(short, long)]
        output: Option<std::path::PathBuf>,
    },
    /// Betti table of a Tate resolution window
    Tate {
        #[arg(long)]
        module: std::path::PathBuf,
        /// Window "lo:hi" of cohomological indices
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Hypercohomology table h^j(F(d)) of the seed's sheaf complex
    Cohomology {
        #[arg(long)]
        module: std::path::PathBuf,
        /// Twist range "lo:hi" (columns)
        #[arg(long, allow_hyphen_values = true)]
        twists: String,
        /// Degree range "lo:hi" (rows; default 0:n)
        #[arg(long, allow_hyphen_values = true)]
        degrees: Option<String>,
        /// Also print the Castelnuovo–Mumford regularity
        #[arg(long)]
        regularity: bool,
    },
    /// Beilinson monad of the seed (omega form with differentials, or the
    /// term data of the linear form)
    Beilinson {
        #[arg(long)]
        module: std::path::PathBuf,
        /// omega | linear
        #[arg(long, default_value = "omega")]
        form: String,
        /// Tate window "lo:hi" (default: the required window)
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Dump the differential blocks (omega form)
        #[arg(long)]
        blocks: bool,
    },
    /// dim Hom_{D(P)}(L(source), T^p L(target))
    Hom {
        #[arg(long)]
        source: std::path::PathBuf,
        #[arg(long)]
        target: std::path::PathBuf,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        p: i64,
    },
    /// Run a verification suite against the independent oracles
    Verify {
        /// serre | bott | euler | cech | strand | roundtrip
        #[arg(long)]
        suite: String,
        /// RNG seed for the randomized suites
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random cases
        #[arg(long, default_value_t = 25)]
        count: usize,
        #[command(flatten)]
        field: FieldOpt,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("range must be \"lo:hi\", got {s:?}")))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad range bound {lo:?}")))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad range bound {hi:?}")))?;
    if lo > hi {
        return Err(Error::Parse(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

fn make_field(ch: u64) -> Result<PrimeField, Error> {
    let p = u32::try_from(ch).map_err(|_| Error::Parse("characteristic too large".into()))?;
    let is_prime =
        (2..(1 << 31)).contains(&p) && !(2..).take_while(|d| d * d <= p).any(|d| p % d == 0);
    if !is_prime {
        return Err(Error::Parse(format!(
            "characteristic {p} is not a prime < 2^31 (use 0 for ℚ)"
        )));
    }
    Ok(PrimeField::new(p))
}

/// Load a module file and dispatch on its recorded characteristic.
fn with_module<R>(
    path: &std::path::Path,
    f: impl FnOnce(Arc<LambdaModule<PrimeField>>) -> Result<R, Error>,
    g: impl FnOnce(Arc<LambdaModule<Rationals>>) -> Result<R, Error>,
) -> Result<R, Error> {
    let text = std::fs::read_to_string(path)?;
    let ch = module_char(&text)?;
    if ch == 0 {
        g(Arc::new(read_module(Rationals, &text)?))
    } else {
        let p = u32::try_from(ch).map_err(|_| Error::Parse("characteristic too large".into()))?;
        f(Arc::new(read_module(PrimeField::new(p), &text)?))
    }
}

/// Normalize a seed through split_free, reporting any stripped summands.
fn normalize<F: Field>(m: Arc<LambdaModule<F>>) -> Arc<LambdaModule<F>> {
    let s = split_free(&m);
    if !s.twists.is_empty() {
        eprintln!(
            "note: split off free summands Λ({}) before resolving",
            s.twists
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join("), Λ(")
        );
    }
    s.core
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gallery {
            name,
            n,
            a,
            m,
            i,
            field,
            output,
        } => {
            let text = if field.char == 0 {
                let ctx = Ctx::new(n, Rationals);
                write_module(&*gallery(&ctx, &name, a, m, i)?)
            } else {
                let ctx = Ctx::new(n, make_field(field.char)?);
                write_module(&*gallery(&ctx, &name, a, m, i)?)
            };
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Tate { module, window } => {
            let w = parse_range(&window)?;
            with_module(&module, |m| cmd_tate(m, w), |m| cmd_tate(m, w))
        }
        Command::Cohomology {
            module,
            twists,
            degrees,
            regularity,
        } => {
            let tw = parse_range(&twists)?;
            let dg = degrees.map(|d| parse_range(&d)).transpose()?;
            with_module(
                &module,
                |m| cmd_cohomology(m, tw, dg, regularity),
                |m| cmd_cohomology(m, tw, dg, regularity),
            )
        }
        Command::Beilinson {
            module,
            form,
            window,
            blocks,
        } => {
            let w = window.map(|w| parse_range(&w)).transpose()?;
            with_module(
                &module,
                |m| cmd_beilinson(m, &form, w, blocks),
                |m| cmd_beilinson(m, &form, w, blocks),
            )
        }
        Command::Hom { source, target, p } => {
            let src_text = std::fs::read_to_string(&source)?;
            let ch = module_char(&src_text)?;
            if ch == 0 {
                let s = Arc::new(read_module(Rationals, &src_text)?);
                let t = Arc::new(read_module(Rationals, &std::fs::read_to_string(&target)?)?);
                println!("{}", hom_derived_dim(&s, &normalize(t), p)?);
            } else {
                let f = make_field(ch)?;
                let s = Arc::new(read_module(f, &src_text)?);
                let t = Arc::new(read_module(f, &std::fs::read_to_string(&target)?)?);
                println!("{}", hom_derived_dim(&s, &normalize(t), p)?);
            }
            Ok(())
        }
        Command::Verify {
            suite,
            seed,
            count,
            field,
        } => {
            if field.char == 0 {
                verify_suite(Rationals, &suite, seed, count)
            } else {
                verify_suite(make_field(field.char)?, &suite, seed, count)
            }
        }
    }
}

fn cmd_tate<F: Field>(m: Arc<LambdaModule<F>>, window: (i64, i64)) -> Result<(), Error> {
    let seed = normalize(m);
    let t = tate_resolution(&seed, window)?;
    bgg_core::cohomology::betti_table(&t)?;
    print!("{}", render_betti(&t, window));
    Ok(())
}

fn cmd_cohomology<F: Field>(
    m: Arc<LambdaModule<F>>,
    twists: (i64, i64),
    degrees: Option<(i64, i64)>,
    regularity: bool,
) -> Result<(), Error> {
    let seed = normalize(m);
    let table = match degrees {
        Some(d) => cohomology_table(&seed, twists, d)?,
        None => sheaf_table(&seed, twists)?,
    };
    print!("{}", table.render());
    if regularity {
        println!("regularity: {}", cm_regularity(&table)?);
    }
    Ok(())
}

fn cmd_beilinson<F: Field>(
    m: Arc<LambdaModule<F>>,
    form: &str,
    window: Option<(i64, i64)>,
    blocks: bool,
) -> Result<(), Error> {
    let seed = normalize(m);
    let w = window.unwrap_or_else(|| required_window(&seed));
    let need = required_window(&seed);
    if w.0 > need.0 || w.1 < need.1 {
        return Err(Error::Window(format!(
            "Beilinson needs the Tate window [{}, {}]",
            need.0, need.1
        )));
    }
    let t = tate_resolution(&seed, w)?;
    match form {
        "omega" => {
            let monad = beilinson_omega_from_tate(&t)?;
            print!("{}", monad.render());
            if blocks {
                print!("{}", monad.render_blocks(&seed.ctx().field));
            }
        }
        "linear" => {
            let terms = beilinson_linear_terms_from_tate(&t)?;
            print!("{}", terms.render());
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown form {other:?} (omega | linear)"
            )))
        }
    }
    Ok(())
}

struct SuiteReport {
    name: String,
    passed: usize,
    failed: usize,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            passed: 0,
            failed: 0,
        }
    }

    fn case(&mut self, label: &str, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            eprintln!("FAIL [{}] {label}", self.name);
        }
    }

    fn finish(self) -> Result<(), Error> {
        println!(
            "suite {}: {} passed, {} failed",
            self.name, self.passed, self.failed
        );
        std::io::stdout().flush().ok();
        if self.failed > 0 {
            Err(Error::Precondition(format!("suite {} failed", self.name)))
        } else {
            Ok(())
        }
    }
}

fn verify_suite<F: Field>(field: F, suite: &str, seed: u64, count: usize) -> Result<(), Error> {
    match suite {
        "serre" => {
            let mut rep = SuiteReport::new("serre");
            for n in 1..=4usize {
                let ctx = Ctx::new(n, field.clone());
                let k = Arc::new(underline_k(&ctx, 0));
                let table = sheaf_table(&k, (-8, 8))?;
                for a in -8..=8i64 {
                    rep.case(&format!("n={n} a={a}"), table.column(a) == serre_dims(n, a));
                }
            }
            rep.finish()
        }
        "bott" => {
            let mut rep = SuiteReport::new("bott");
            for n in 2..=3usize {
                let ctx = Ctx::new(n, field.clone());
                for i in 0..=n {
                    let seed_m = gallery(&ctx, "omega", None, None, Some(i))?;
                    let table = sheaf_table(&seed_m, (-4, 4))?;
                    for d in -4..=4i64 {
                        rep.case(
                            &format!("n={n} i={i} d={d}"),
                            table.column(d) == bott_dims(n, i, i as i64 + d),
                        );
                    }
                }
            }
            rep.finish()
        }
        "euler" => {
            let mut rep = SuiteReport::new("euler");
            let mut r = rng(seed);
            for n in 1..=2usize {
                let ctx = Ctx::new(n, field.clone());
                for case in 0..count {
                    let m = random_seed(&ctx, &mut r, 40);
                    let lo = m.min_degree().unwrap();
                    let hi = m.max_degree().unwrap();
                    let table = cohomology_table(&m, (-2, 2), (lo, hi + n as i64))?;
                    let ok = euler_identity(&m, &table).is_ok();
                    rep.case(&format!("n={n} case={case}"), ok);
                }
            }
            rep.finish()
        }
        "cech" => {
            let mut rep = SuiteReport::new("cech");
            let mut r = rng(seed);
            let ctx = Ctx::new(1, field.clone());
            for case in 0..count {
                let m = random_seed(&ctx, &mut r, 20);
                let lo = m.min_degree().unwrap();
                let hi = m.max_degree().unwrap();
                let table = cohomology_table(&m, (-2, 2), (lo, hi + 1))?;
                let l = l_module(&m);
                let mut ok = true;
                for d in -2..=2i64 {
                    let h = p1_hyper(&l.twist(d));
                    for j in lo..=(hi + 1) {
                        if table.get(j, d) != h.get(&j).copied().unwrap_or(0) {
                            ok = false;
                        }
                    }
                }
                rep.case(&format!("case={case} table"), ok);
                // multiplication ranks: Thm 10(b) extraction vs monomial
                // multiplication on honest Čech hypercohomology
                let t = tate_resolution(&m, (-1, hi + 2))?;
                let mut ok = true;
                for i in -1..=0i64 {
                    let src = P1Cohomology::new(&l.twist(i));
                    let tgt = P1Cohomology::new(&l.twist(i + 1));
                    for j in lo..=(hi + 1) {
                        let p = i + j;
                        if p < -1 || p + 1 > hi + 2 {
                            continue;
                        }
                        let eng = multiplication_map(&t, p, i)?;
                        let engine_rank = matrix::rank(&ctx.field, &eng);
                        let basis = src.basis(j);
                        let mut rows = Vec::new();
                        for b in &basis {
                            for var in 0..2 {
                                rows.push(src.mul_into(&tgt, b, var));
                            }
                        }
                        let oracle_rank = if rows.is_empty() {
                            0
                        } else {
                            let mat =
                                bgg_core::matrix::Mat::from_rows(&ctx.field, tgt.dim(j), rows);
                            matrix::rank(&ctx.field, &mat)
                        };
                        if engine_rank != oracle_rank {
                            ok = false;
                        }
                    }
                }
                rep.case(&format!("case={case} multiplication"), ok);
            }
            rep.finish()
        }
        "strand" => {
            let mut rep = SuiteReport::new("strand");
            let mut r = rng(seed);
            for n in 1..=2usize {
                let ctx = Ctx::new(n, field.clone());
                for case in 0..count {
                    let m = random_seed(&ctx, &mut r, 30);
                    let t = tate_resolution(&m, (-2, 2))?;
                    let mut ok = true;
                    for p in -2..=0i64 {
                        let gs: Vec<i64> = t.term(p).counts().keys().copied().collect();
                        for i in gs {
                            if t.gamma_at(p + 1, i + 1) > 0
                                && t.gamma_at(p + 2, i + 2) > 0
                                && p + 2 <= 2
                            {
                                ok &= strand_anticommutes(&t, p, i).is_ok();
                            }
                        }
                    }
                    rep.case(&format!("n={n} case={case}"), ok);
                }
            }
            rep.finish()
        }
        "roundtrip" => {
            let mut rep = SuiteReport::new("roundtrip");
            let mut r = rng(seed);
            let ctx = Ctx::new(2, field.clone());
            for case in 0..count {
                let m = random_module(&ctx, &mut r, 40);
                let text = write_module(&m);
                let ok = match read_module(field.clone(), &text) {
                    Ok(parsed) => parsed == *m && write_module(&parsed) == text,
                    Err(_) => false,
                };
                rep.case(&format!("case={case}"), ok);
            }
            rep.finish()
        }
        other => Err(Error::Parse(format!("unknown suite {other:?}"))),
    }
}
