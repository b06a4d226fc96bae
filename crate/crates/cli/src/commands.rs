use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigUint;
use serde_json::{json, Value};
use torlat_core::classify::{enumerate_z_types, load_catalog, partition_q_types, save_catalog, TypeCatalog};
use torlat_core::conjtest::{q_conjugacy, z_conjugacy, ConjugacyCertificate, Verdict, Witness};
use torlat_core::matgroup::{AnyGroup, GroupMatrix, MatrixGroup};
use torlat_core::rootsys::{max_order_entry, signed_permutation_order};
use torlat_core::torus::{
    dual_torus, hom_module, TorusPresentation, is_isogenous, is_isomorphic, serre_bound_check, torsion_rep,
};
use torlat_core::{Error, Result};

use crate::input::{load_group, load_int_group, load_torus};
use crate::{Cli, Command, ConjCommand, Format, Global, GroupCommand, Outcome, Pairing, RingArg, TorusCommand};

/// Published maximal orders for `d = 1..=10`.
fn expected_max_order(d: usize) -> BigUint {
    let published: u64 = match d {
        2 => 12,
        4 => 1152,
        6 => 103_680,
        7 => 2_903_040,
        8 => 696_729_600,
        9 => 1_393_459_200,
        10 => 8_360_755_200,
        _ => return signed_permutation_order(d),
    };
    published.into()
}

/// Published `(Z-classes, Q-classes)` counts.
fn expected_counts(d: usize) -> Option<(usize, usize)> {
    match d {
        1 => Some((2, 2)),
        2 => Some((13, 10)),
        3 => Some((73, 32)),
        _ => None,
    }
}

pub const CACHE_ENV: &str = "TORLAT_CACHE_DIR";

struct Ctx<'a> {
    global: &'a Global,
}

impl Ctx<'_> {
    fn progress(&self, msg: impl AsRef<str>) {
        if !self.global.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    /// Prints a structured result: pretty JSON in text mode, one line in JSON mode.
    fn emit_value(&self, v: &Value) -> Result<()> {
        match self.global.format {
            Format::Text => println!("{}", serde_json::to_string_pretty(v)?),
            Format::Json => println!("{v}"),
        }
        Ok(())
    }

    fn emit(&self, text: impl FnOnce() -> String, v: impl FnOnce() -> Value) -> Result<()> {
        match self.global.format {
            Format::Text => println!("{}", text()),
            Format::Json => println!("{}", v()),
        }
        Ok(())
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let ctx = Ctx { global: &cli.global };
    match &cli.command {
        Command::Table1 { verify, dims } => table1(&ctx, *verify, dims.as_deref()),
        Command::Classify { dim, out, verify_counts, no_cache } => {
            classify(&ctx, *dim, out.as_ref(), *verify_counts, *no_cache)
        }
        Command::Conj { command } => conj(&ctx, command),
        Command::Group { command } => group(&ctx, command),
        Command::Torus { command } => torus(&ctx, command),
    }
}

fn table1(ctx: &Ctx, verify: bool, dims: Option<&[usize]>) -> Result<Outcome> {
    let dims: Vec<usize> = dims.map(<[usize]>::to_vec).unwrap_or_else(|| (1..=10).collect());
    if let Some(&d) = dims.iter().find(|&&d| !(1..=10).contains(&d)) {
        return Err(Error::Malformed(format!("table rows exist for d = 1..10, not {d}")));
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut mismatch = None;
    for &d in &dims {
        let entry = max_order_entry(d)?;
        ctx.progress(format!("d = {d}: {} has order {}", entry.group, entry.max_order));
        let expected = expected_max_order(d);
        if verify && mismatch.is_none() && entry.max_order != expected {
            mismatch = Some(format!("d = {d}: computed {} but expected {expected}", entry.max_order));
        }
        rows.push(entry);
    }
    ctx.progress(format!("table computed in {:.1?}", start.elapsed()));
    ctx.emit(
        || {
            let mut s = String::from("d | group | order");
            for r in &rows {
                s.push_str(&format!("\n{} | {} | {}", r.d, r.group, r.max_order));
            }
            s
        },
        || json!(rows),
    )?;
    Ok(match mismatch {
        Some(m) => Outcome::VerificationFailed(m),
        None => Outcome::Ok,
    })
}

fn cache_path(d: usize) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(|dir| PathBuf::from(dir).join(format!("catalog-d{d}.json")))
}

fn obtain_catalog(ctx: &Ctx, d: usize, no_cache: bool) -> Result<TypeCatalog> {
    let cache = if no_cache { None } else { cache_path(d) };
    if let Some(path) = cache.as_ref().filter(|p| p.exists()) {
        match load_catalog(path) {
            Ok(c) if c.dimension() == d => {
                ctx.progress(format!("loaded catalog from {}", path.display()));
                return Ok(c);
            }
            Ok(_) => ctx.progress(format!("ignoring {}: wrong dimension", path.display())),
            Err(e) => ctx.progress(format!("ignoring {}: {e}", path.display())),
        }
    }
    let start = Instant::now();
    ctx.progress(format!("enumerating Z-classes in dimension {d}"));
    let z = enumerate_z_types(d)?;
    ctx.progress(format!("{} Z-classes after {:.1?}; grouping into Q-classes", z.z_count(), start.elapsed()));
    let catalog = partition_q_types(z)?;
    ctx.progress(format!("done in {:.1?}", start.elapsed()));
    if let Some(path) = cache {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        save_catalog(&catalog, &path)?;
        ctx.progress(format!("cached catalog at {}", path.display()));
    }
    Ok(catalog)
}

fn classify(ctx: &Ctx, d: usize, out: Option<&PathBuf>, verify: bool, no_cache: bool) -> Result<Outcome> {
    let catalog = obtain_catalog(ctx, d, no_cache)?;
    if let Some(path) = out {
        save_catalog(&catalog, path)?;
        ctx.progress(format!("wrote {}", path.display()));
    }
    let (z, q) = (catalog.z_count(), catalog.q_count());
    ctx.emit(
        || format!("{z} Z-classes, {q} Q-classes"),
        || {
            json!({
                "dimension": d,
                "z_classes": z,
                "q_classes": q,
                "q_partition": catalog.q_partition(),
                "representatives": catalog.z_classes(),
            })
        },
    )?;
    if verify {
        let expected = expected_counts(d).ok_or(Error::UnsupportedDimension(d))?;
        if (z, q) != expected {
            return Ok(Outcome::VerificationFailed(format!(
                "dimension {d}: found {z} Z-classes and {q} Q-classes, expected {} and {}",
                expected.0, expected.1
            )));
        }
    }
    Ok(Outcome::Ok)
}

fn conj(ctx: &Ctx, command: &ConjCommand) -> Result<Outcome> {
    let ConjCommand::Test { a, b, ring, bound } = command;
    let (ga, gb) = (load_group(a)?, load_group(b)?);
    if ga.dimension() != gb.dimension() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", ga.dimension(), gb.dimension())));
    }
    let cert = match ring {
        RingArg::Z => {
            let (ga, gb) = (load_int_group(a)?, load_int_group(b)?);
            z_conjugacy(&ga, &gb, *bound)?
        }
        RingArg::Q => q_conjugacy(&ga.to_rational(), &gb.to_rational())?,
    };
    let v = serde_json::to_value(&cert)?;
    ctx.emit(|| certificate_text(&cert), || v)?;
    Ok(Outcome::Ok)
}

fn certificate_text(c: &ConjugacyCertificate) -> String {
    match (&c.verdict, &c.witness) {
        (Verdict::Conjugate, Witness::Integral(u)) => format!("conjugate over Z\nwitness: {u}"),
        (Verdict::Conjugate, Witness::Rational(u)) => format!("conjugate over Q\nwitness: {u}"),
        (Verdict::Unknown(b), _) => format!("unknown (search bound {b})"),
        (_, Witness::Invariant(s)) => format!("not conjugate\ndistinguished by: {s}"),
        (v, w) => format!("{v:?}: {w:?}"),
    }
}

fn group(ctx: &Ctx, command: &GroupCommand) -> Result<Outcome> {
    match command {
        GroupCommand::Order { group } => {
            let g = load_group(group)?;
            let n = match &g {
                AnyGroup::Z(g) => g.order_schreier_sims()?,
                AnyGroup::Q(g) => g.order_schreier_sims()?,
            };
            ctx.emit(|| n.to_string(), || json!({ "order": n.to_string() }))?;
        }
        GroupCommand::Classes { group } => match load_group(group)? {
            AnyGroup::Z(g) => classes(ctx, &g)?,
            AnyGroup::Q(g) => classes(ctx, &g)?,
        },
        GroupCommand::Fingerprint { group } => {
            let g = load_group(group)?;
            let fp = match &g {
                AnyGroup::Z(g) => g.character_fingerprint()?.clone(),
                AnyGroup::Q(g) => g.character_fingerprint()?.clone(),
            };
            ctx.emit(|| fp.to_string(), || json!(fp))?;
        }
        GroupCommand::Subgroups { group } => {
            let g = load_int_group(group)?;
            let mut counts = std::collections::BTreeMap::<u64, usize>::new();
            for h in g.all_subgroups()? {
                *counts.entry(h.order_u64()?).or_default() += 1;
            }
            let total: usize = counts.values().sum();
            ctx.emit(
                || {
                    let mut s = format!("{total} subgroups");
                    for (o, c) in &counts {
                        s.push_str(&format!("\norder {o}: {c}"));
                    }
                    s
                },
                || json!({ "total": total, "by_order": counts.iter().map(|(o, c)| json!({"order": o, "count": c})).collect::<Vec<_>>() }),
            )?;
        }
        GroupCommand::Elements { group } => match load_group(group)? {
            AnyGroup::Z(g) => elements(ctx, &g)?,
            AnyGroup::Q(g) => elements(ctx, &g)?,
        },
        GroupCommand::Reduce { group, modulus } => {
            if *modulus < 2 {
                return Err(Error::Malformed("modulus must be at least 2".into()));
            }
            let g = load_int_group(group)?;
            let (faithful, kernel) = g.is_faithful_reduction(*modulus)?;
            ctx.emit(
                || {
                    if faithful {
                        format!("reduction mod {modulus} is injective")
                    } else {
                        format!("reduction mod {modulus} has kernel of order {}", kernel.len() + 1)
                    }
                },
                || json!({ "modulus": modulus, "faithful": faithful, "kernel": kernel }),
            )?;
        }
        GroupCommand::Lookup { group, no_cache } => {
            let g = load_int_group(group)?;
            let catalog = obtain_catalog(ctx, g.dimension(), *no_cache)?;
            let i = catalog.lookup(&g)?;
            let q = catalog.q_class_of(i);
            ctx.emit(
                || format!("Z-class {i} of {}, Q-class {} of {}", catalog.z_count(), q.map_or("?".into(), |q| q.to_string()), catalog.q_count()),
                || json!({ "dimension": g.dimension(), "z_class": i, "q_class": q, "representative": catalog.z_classes()[i] }),
            )?;
        }
    }
    Ok(Outcome::Ok)
}

fn classes<M: GroupMatrix>(ctx: &Ctx, g: &MatrixGroup<M>) -> Result<()> {
    let cls = g.conjugacy_classes()?;
    let rows: Vec<Value> = cls
        .iter()
        .map(|c| {
            json!({
                "representative": c.representative,
                "size": c.size,
                "element_order": c.element_order,
                "trace": c.representative.trace_q().to_string(),
            })
        })
        .collect();
    ctx.emit(
        || {
            let mut s = format!("{} classes", cls.len());
            for c in cls {
                s.push_str(&format!(
                    "\norder {} size {} trace {}: {}",
                    c.element_order,
                    c.size,
                    c.representative.trace_q(),
                    c.representative
                ));
            }
            s
        },
        || json!(rows),
    )
}

fn elements<M: GroupMatrix>(ctx: &Ctx, g: &MatrixGroup<M>) -> Result<()> {
    let els = g.elements()?;
    ctx.emit(
        || els.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
        || json!(els),
    )
}

fn load_pair(a: &str, b: &str, pairing: Pairing) -> Result<(TorusPresentation, TorusPresentation)> {
    let (ta, tb) = (load_torus(a)?, load_torus(b)?);
    if pairing.shared_galois {
        const SHARED: &str = "shared";
        return Ok((ta.with_label(SHARED), tb.with_label(SHARED)));
    }
    Ok((ta, tb))
}

fn torus(ctx: &Ctx, command: &TorusCommand) -> Result<Outcome> {
    match command {
        TorusCommand::Hom { a, b, pairing } => {
            let (ta, tb) = load_pair(a, b, *pairing)?;
            let h = hom_module(&ta, &tb);
            let v = serde_json::to_value(&h)?;
            ctx.emit(
                || {
                    let mut s = format!("rank {}", h.rank);
                    for phi in &h.basis {
                        s.push_str(&format!("\n{phi}"));
                    }
                    s
                },
                || v,
            )?;
        }
        TorusCommand::Dual { torus } => {
            let t = dual_torus(&load_torus(torus)?);
            ctx.emit_value(&serde_json::to_value(&t)?)?;
        }
        TorusCommand::Torsion { torus, modulus } => {
            if *modulus < 2 {
                return Err(Error::Malformed("modulus must be at least 2".into()));
            }
            let r = torsion_rep(&load_torus(torus)?, *modulus)?;
            ctx.emit_value(&serde_json::to_value(&r)?)?;
        }
        TorusCommand::SerreCheck { torus, modulus_range: (lo, hi) } => {
            let t = load_torus(torus)?;
            let mut reports = Vec::new();
            let mut failures = Vec::new();
            for n in *lo..=*hi {
                match serre_bound_check(&t, n) {
                    Ok(r) => reports.push(serde_json::to_value(&r)?),
                    Err(Error::AssertionFailure(msg)) => {
                        failures.push(format!("N = {n}: {msg}"));
                        reports.push(json!({ "modulus": n, "failure": msg }));
                    }
                    Err(e) => return Err(e),
                }
            }
            ctx.emit_value(&Value::Array(reports))?;
            if !failures.is_empty() {
                return Ok(Outcome::VerificationFailed(failures.join("; ")));
            }
        }
        TorusCommand::Isogeny { a, b, pairing } => {
            let (ta, tb) = load_pair(a, b, *pairing)?;
            let r = is_isogenous(&ta, &tb)?;
            ctx.emit(|| if r { "isogenous".into() } else { "not isogenous".into() }, || json!({ "isogenous": r }))?;
        }
        TorusCommand::Iso { a, b, pairing, height } => {
            let (ta, tb) = load_pair(a, b, *pairing)?;
            let c = is_isomorphic(&ta, &tb, *height)?;
            let v = serde_json::to_value(&c)?;
            ctx.emit(|| certificate_text(&c), || v)?;
        }
    }
    Ok(Outcome::Ok)
}
