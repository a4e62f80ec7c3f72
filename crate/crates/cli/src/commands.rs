use pq_census::atlas::{self, list_rows, validate_row_arithmetic, AtlasEntry, RowParams};
use pq_census::build_chain;
use pq_census::census::{verify_tables, TablesOptions};
use pq_census::frobenius::{find_regular_frobenius_with, verify_certificate, FrobeniusCertificate, SearchBudget};
use pq_census::graphs::{cayley_relative_test, export_graph6, orbital_graphs, CayleyStatus};
use pq_census::nc::{nc_check, nc_check_all, nc_enumerate_filtered};
use pq_census::structure::{classify, find_nontrivial_blocks};
use serde_json::{json, Value};

use crate::io::{load_group, read_json, write, write_json, CliResult};
use crate::{AtlasCommand, BuildArgs, Cli, Command, GroupCommand, NcCommand, OrbitalsArgs, VerifyCommand};

pub struct Outcome {
    pub inputs: Value,
    pub results: Value,
    pub positive: bool,
    /// Replaces the JSON report on stdout.
    pub text: Option<String>,
}

impl Outcome {
    fn new(inputs: Value, results: Value, positive: bool) -> Self {
        Outcome {
            inputs,
            results,
            positive,
            text: None,
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Nc(NcCommand::Check { p, q, all }) => nc_check_cmd(*p, *q, *all),
        Command::Nc(NcCommand::List { max, odd_only }) => {
            let witnesses = nc_enumerate_filtered(*max, *odd_only)?;
            let results = json!({ "count": witnesses.len(), "witnesses": witnesses });
            Ok(Outcome::new(json!({ "max": max, "odd_only": odd_only }), results, true))
        }
        Command::Atlas(AtlasCommand::List { max_degree }) => {
            let reports: Vec<_> = list_rows(*max_degree).iter().map(validate_row_arithmetic).collect();
            let passed = reports.iter().all(|r| r.passed());
            let results = json!({ "rows": reports.len(), "passed": passed, "validations": reports });
            Ok(Outcome::new(json!({ "max_degree": max_degree }), results, passed))
        }
        Command::Atlas(AtlasCommand::Build(args)) => atlas_build(args, seed),
        Command::Group(GroupCommand::Info { file }) => {
            let g = load_group(file)?;
            let chain = build_chain(&g, seed);
            let profile = classify(&g);
            if !profile.transitive {
                eprintln!("pq-census: {} is not transitive", file.display());
            }
            let blocks = if profile.transitive && !profile.primitive {
                find_nontrivial_blocks(&g)
            } else {
                None
            };
            let results = json!({
                "label": g.label(),
                "degree": g.degree(),
                "generators": g.generators().len(),
                "order": chain.order().to_string(),
                "base": chain.base(),
                "transversal_lengths": chain.transversal_lengths(),
                "orbits": if profile.transitive { Value::Null } else { json!(g.orbits()) },
                "profile": profile,
                "blocks": blocks,
            });
            Ok(Outcome::new(json!({ "file": file }), results, true))
        }
        Command::Orbitals(args) => orbitals(args, seed),
        Command::Verify(VerifyCommand::Corollary { file, p, q, output }) => {
            let g = load_group(file)?;
            let budget = SearchBudget::from_env();
            let inputs = json!({ "file": file, "p": p, "q": q, "budget": budget });
            match find_regular_frobenius_with(&g, *p, *q, seed, budget)? {
                Some(cert) => {
                    let verification = verify_certificate(&g, &cert);
                    if let Some(path) = output {
                        write_json(path, &cert)?;
                    }
                    let passed = verification.passed();
                    let results = json!({
                        "found": true,
                        "verified": passed,
                        "certificate": cert,
                        "verification": verification.lines,
                        "output": output,
                    });
                    Ok(Outcome::new(inputs, results, passed))
                }
                None => {
                    eprintln!("pq-census: no regular Frobenius subgroup found within the budget");
                    let results = json!({ "found": false, "mode": "randomized", "budget": budget });
                    Ok(Outcome::new(inputs, results, false))
                }
            }
        }
        Command::Verify(VerifyCommand::Certificate { file, certificate }) => {
            let g = load_group(file)?;
            let cert: FrobeniusCertificate = read_json(certificate)?;
            let verification = verify_certificate(&g, &cert);
            let passed = verification.passed();
            let results = json!({ "verified": passed, "verification": verification.lines });
            Ok(Outcome::new(
                json!({ "file": file, "certificate": certificate }),
                results,
                passed,
            ))
        }
        Command::Verify(VerifyCommand::Tables { max_degree }) => {
            let opts = TablesOptions {
                max_degree: *max_degree,
                seed,
                budget: SearchBudget::from_env(),
            };
            let report = verify_tables(&opts);
            for f in &report.failures {
                eprintln!("pq-census: failed: {f}");
            }
            let passed = report.passed;
            let inputs = json!({ "max_degree": max_degree, "budget": opts.budget });
            Ok(Outcome::new(
                inputs,
                serde_json::to_value(report).expect("serializable"),
                passed,
            ))
        }
    }
}

fn nc_check_cmd(p: u64, q: u64, all: bool) -> CliResult<Outcome> {
    let inputs = json!({ "p": p, "q": q, "all": all });
    if all {
        let witnesses = nc_check_all(p, q)?;
        let in_nc = !witnesses.is_empty();
        let results = json!({ "n": p * q, "in_nc": in_nc, "witnesses": witnesses });
        Ok(Outcome::new(inputs, results, in_nc))
    } else {
        let witness = nc_check(p, q)?;
        let in_nc = witness.is_some();
        let results = json!({ "n": p * q, "in_nc": in_nc, "witness": witness });
        Ok(Outcome::new(inputs, results, in_nc))
    }
}

fn atlas_build(args: &BuildArgs, seed: u64) -> CliResult<Outcome> {
    let params = RowParams {
        q: args.q,
        p: args.p,
        n: args.n,
        s: args.s,
        a: args.a,
        sign: args.sign,
    };
    let entry = AtlasEntry::from_params(args.family, params)?;
    let action = atlas::build(&entry, seed)?;
    write_json(&args.output, &action.to_group_file())?;
    let order = build_chain(&action.target, seed).order().to_string();
    let results = json!({
        "entry": entry,
        "label": entry.label(),
        "degree": action.degree(),
        "order": order,
        "expected_order": entry.socle_order().to_string(),
        "output": args.output,
    });
    let inputs = json!({ "family": args.family, "params": params, "output": args.output });
    Ok(Outcome::new(inputs, results, true))
}

fn orbitals(args: &OrbitalsArgs, seed: u64) -> CliResult<Outcome> {
    let g = load_group(&args.file)?;
    let mut report = orbital_graphs(&g)?;
    let mut cayley_note = None;
    if let Some(mode) = args.cayley_test {
        for og in &mut report.graphs {
            og.cayley = Some(cayley_relative_test(&g, &og.graph, mode.into(), seed)?);
        }
        cayley_note = report.graphs.first().and_then(|og| match og.cayley {
            Some(CayleyStatus::NonCayleyRelative) => Some("no regular subgroup in the supplied group"),
            Some(CayleyStatus::Unknown) => Some("no regular subgroup found in the supplied group within the budget"),
            _ => None,
        });
    }
    let mut lines = String::new();
    for og in &report.graphs {
        lines.push_str(&export_graph6(&og.graph)?);
        lines.push('\n');
    }
    let inputs = json!({
        "file": args.file,
        "out": args.out,
        "graph6": args.graph6,
        "cayley_test": args.cayley_test.map(pq_census::frobenius::SearchMode::from),
    });
    let results = json!({ "orbitals": report, "cayley_note": cayley_note });
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(|source| crate::io::CliError::Io {
            path: dir.clone(),
            source,
        })?;
        write(&dir.join("orbitals.g6"), &lines)?;
        write_json(&dir.join("report.json"), &results)?;
    }
    let mut outcome = Outcome::new(inputs, results, true);
    if args.graph6 {
        outcome.text = Some(lines);
    }
    Ok(outcome)
}
