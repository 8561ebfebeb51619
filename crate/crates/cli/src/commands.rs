//! The subcommands. Each returns rendered text plus a pass flag, or a [`CliError`].

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semistable_core::lattice::verify_g1_congruence;
use semistable_core::llc::{self, GaloisRepDescriptor, Reduction, ReductionInput, Region};
use semistable_core::mahler::{c0_valuation, mahler_coeffs, wavelet_decompose};
use semistable_core::tree::{random_edge_function, HeckeCache, HeckeRelation, IZCharacter};
use semistable_core::{Error, PadicScalar, Prime, Surd};
use serde::Serialize;

use crate::parse::{self, format_rational, NuTarget};
use crate::schema::{self, *};
use crate::{CliError, Format, HeckeArgs, LabArgs, MahlerArgs, Output, ReduceArgs, ScanArgs};

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn failure(e: impl ToString) -> CliError {
    CliError::Failure(e.to_string())
}

fn prime(p: u64) -> Result<Prime, CliError> {
    Prime::new(p).map_err(usage)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn tsv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join("\t");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join("\t"));
        s.push('\n');
    }
    s
}

fn surd_text(l: &Surd) -> String {
    let a = format_rational(&l.rational);
    if num_traits::Zero::is_zero(&l.sqrt_coeff) {
        a
    } else {
        format!("{a}+({})√p", format_rational(&l.sqrt_coeff))
    }
}

fn opt_text<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn kind(d: &GaloisRepDescriptor) -> &'static str {
    if d.is_irreducible() {
        "irreducible"
    } else {
        "reducible"
    }
}

fn region_cols(r: Region) -> [String; 2] {
    let j = RegionJson::from(r);
    [j.kind.into(), j.index.to_string()]
}

pub fn reduce(a: &ReduceArgs, fmt: Format) -> Result<Output, CliError> {
    let p = prime(a.p)?;
    let l = Surd::new(
        p,
        parse::rational(&a.l).map_err(CliError::Usage)?,
        parse::rational(&a.l_sqrtp).map_err(CliError::Usage)?,
    );
    let input = ReductionInput::new(p, a.k, l).map_err(usage)?;
    let red = llc::reduce(&input).map_err(failure)?;
    let det = llc::det_check(&red.descriptor, input.r());
    let smooth = llc::iwahori_llc(&red.descriptor).map_err(failure)?;
    let text = match fmt {
        Format::Json => json(&ReduceReport {
            schema: schema::REDUCE,
            p: p.get(),
            k: a.k,
            r: input.r(),
            l: input.l().into(),
            nu: valuation(red.nu),
            region: red.region.into(),
            descriptor: (&red.descriptor).into(),
            lambda: red.lambda.as_ref().map(fp2),
            trace: red.trace.map(|t| t.value()),
            det_check: det,
            llc: smooth.iter().map(SmoothJson::from).collect(),
        }),
        Format::Tsv => {
            let [region, index] = region_cols(red.region);
            let llc_text: Vec<String> = smooth.iter().map(ToString::to_string).collect();
            tsv(
                &[
                    "p", "k", "r", "L", "nu", "region", "index", "type", "descriptor", "lambda",
                    "trace", "det_check", "llc",
                ],
                &[vec![
                    p.get().to_string(),
                    a.k.to_string(),
                    input.r().to_string(),
                    surd_text(input.l()),
                    valuation(red.nu),
                    region,
                    index,
                    kind(&red.descriptor).into(),
                    red.descriptor.to_string(),
                    opt_text(red.lambda),
                    opt_text(red.trace),
                    det.to_string(),
                    llc_text.join(" ; "),
                ]],
            )
        }
    };
    Ok(Output { text, ok: det })
}

pub fn scan(a: &ScanArgs, fmt: Format) -> Result<Output, CliError> {
    let p = prime(a.p)?;
    let base = ReductionInput::new(p, a.k, Surd::zero(p)).map_err(usage)?;
    let r = base.r();
    let ls: Vec<Surd> = match (&a.nu_grid, &a.l_grid) {
        (Some(g), None) => parse::nu_grid(g)
            .map_err(CliError::Usage)?
            .into_iter()
            .map(|t| match t {
                NuTarget::Finite(twice) => llc::l_with_nu(p, r, twice, &num_traits::One::one()),
                NuTarget::Infinite => llc::l_with_nu(p, r, 0, &num_traits::Zero::zero()),
            })
            .collect(),
        (None, Some(g)) => parse::rational_list(g)
            .map_err(CliError::Usage)?
            .into_iter()
            .map(|q| Surd::from_rational(p, q))
            .collect(),
        _ => return Err(usage("give exactly one of --nu-grid and --L-grid")),
    };
    let mut reductions: Vec<(Surd, Reduction)> = Vec::with_capacity(ls.len());
    for l in ls {
        let input = ReductionInput::new(p, a.k, l.clone()).map_err(usage)?;
        reductions.push((l, llc::reduce(&input).map_err(failure)?));
    }
    let text = match fmt {
        Format::Json => json(&ScanReport {
            schema: schema::SCAN,
            p: p.get(),
            k: a.k,
            rows: reductions.iter().map(|(l, red)| ScanRow::new(l, red)).collect(),
        }),
        Format::Tsv => {
            let rows: Vec<Vec<String>> = reductions
                .iter()
                .map(|(l, red)| {
                    let [region, index] = region_cols(red.region);
                    vec![
                        valuation(red.nu),
                        surd_text(l),
                        region,
                        index,
                        kind(&red.descriptor).into(),
                        red.descriptor.to_string(),
                        opt_text(red.lambda),
                    ]
                })
                .collect();
            tsv(&["nu", "L", "region", "index", "type", "descriptor", "lambda"], &rows)
        }
    };
    Ok(Output { text, ok: true })
}

pub fn hecke_verify(a: &HeckeArgs, fmt: Format) -> Result<Output, CliError> {
    let p = prime(a.p)?;
    if u64::from(a.r) >= p.get() {
        return Err(usage(format!("r = {} outside [0, p-1]", a.r)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let chi = IZCharacter::d_power(p, i64::from(a.r));
    let relations = HeckeRelation::applicable(p, a.r);
    let mut results: Vec<RelationJson> = relations
        .iter()
        .map(|rel| RelationJson {
            name: rel.name(),
            checked: 0,
            failures: 0,
            counterexample: None,
        })
        .collect();
    let mut cache = HeckeCache::default();
    for _ in 0..a.trials {
        let f = random_edge_function(chi, 4, 2, |n| rng.gen_range(0..n));
        for (rel, out) in relations.iter().zip(results.iter_mut()) {
            out.checked += 1;
            if !rel.holds_on_with(&f, &mut cache).map_err(failure)? {
                out.failures += 1;
                out.counterexample.get_or_insert_with(|| {
                    f.support()
                        .iter()
                        .map(|(e, v)| EdgeValueJson {
                            edge: e.into(),
                            value: *v,
                        })
                        .collect()
                });
            }
        }
    }
    let pass = results.iter().all(|r| r.failures == 0);
    let text = match fmt {
        Format::Json => json(&HeckeReport {
            schema: schema::HECKE,
            p: p.get(),
            r: a.r,
            trials: a.trials,
            seed: a.seed,
            pass,
            relations: results,
        }),
        Format::Tsv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| vec![r.name.into(), r.checked.to_string(), r.failures.to_string()])
                .collect();
            tsv(&["relation", "checked", "failures"], &rows)
        }
    };
    Ok(Output { text, ok: pass })
}

pub fn mahler(a: &MahlerArgs, precision: u32, fmt: Format) -> Result<Output, CliError> {
    let p = prime(a.p)?;
    let values = parse::rational_list(&a.values).map_err(CliError::Usage)?;
    if values.is_empty() {
        return Err(usage("--values needs at least one entry"));
    }
    let g = |i: u64| PadicScalar::from_rational(&values[i as usize], p, precision);
    let m = mahler_coeffs(p, g, values.len()).map_err(failure)?;
    let w = wavelet_decompose(p, g, values.len()).map_err(failure)?;
    let text = match fmt {
        Format::Json => json(&MahlerReport {
            schema: schema::MAHLER,
            p: p.get(),
            precision,
            mahler: m.coefficients().iter().map(ScalarJson::from).collect(),
            wavelet: w.coefficients().iter().map(ScalarJson::from).collect(),
            c0_valuation: valuation(c0_valuation(&m)),
        }),
        Format::Tsv => {
            let rows: Vec<Vec<String>> = m
                .coefficients()
                .iter()
                .zip(w.coefficients())
                .enumerate()
                .map(|(i, (x, y))| {
                    let (x, y) = (ScalarJson::from(x), ScalarJson::from(y));
                    vec![
                        i.to_string(),
                        x.valuation,
                        opt_text(x.unit),
                        y.valuation,
                        opt_text(y.unit),
                    ]
                })
                .collect();
            tsv(
                &["i", "mahler_valuation", "mahler_unit", "wavelet_valuation", "wavelet_unit"],
                &rows,
            )
        }
    };
    Ok(Output { text, ok: true })
}

pub fn lab(a: &LabArgs, precision: u32, fmt: Format) -> Result<Output, CliError> {
    let p = prime(a.p)?;
    let twice_x = parse::twice_half(&a.x).map_err(CliError::Usage)?;
    if 2 * a.n <= a.r {
        return Err(usage(format!("need n > r/2, got n = {}, r = {}", a.n, a.r)));
    }
    let report = verify_g1_congruence(p, a.r, a.n, twice_x, precision).map_err(|e| match e {
        Error::OutOfRange(_) | Error::InvalidPrecision(_) => usage(e),
        _ => failure(e),
    })?;
    let pass = report.all_pass();
    let text = match fmt {
        Format::Json => json(&LabReport::new(&report, precision)),
        Format::Tsv => {
            let mut s = String::from("a\tj\tpass\tmargin_valuation\n");
            for c in &report.cells {
                writeln!(s, "{}\t{}\t{}\t{}", c.a, c.j, c.pass, valuation(c.margin)).unwrap();
            }
            s
        }
    };
    Ok(Output { text, ok: pass })
}
