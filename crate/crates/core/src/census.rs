//! The table check: arithmetic validation of every row, then construction,
//! classification and (for rows where `pq` is not a non-Cayley number) a certified regular
//! Frobenius subgroup.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atlas::{
    build, list_rows, primitive_overgroup, validate_row_arithmetic, AtlasEntry, Check, TableSource, ValidationReport,
    OVERGROUP_SOCLE_GENERATORS,
};
use crate::chain::{ChainOptions, StabilizerChain};
use crate::frobenius::{find_regular_frobenius_in, verify_certificate, FrobeniusCertificate, SearchBudget};
use crate::graphs::theorem2_check;
use crate::group::PermGroup;
use crate::structure::{classify_with_stabilizer, find_nontrivial_blocks, intransitive_profile, ActionProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablesOptions {
    pub max_degree: u64,
    pub seed: u64,
    pub budget: SearchBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvergroupReport {
    pub label: String,
    pub order: String,
    pub profile: ActionProfile,
    pub socle_order: String,
    pub socle_transitive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub certificate: Option<FrobeniusCertificate>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failed_check: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub order: String,
    pub expected_order: String,
    pub profile: ActionProfile,
    /// Block size of a nontrivial block system of the socle action, if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub socle_block_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub overgroup: Option<OvergroupReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub only_trivial_invariant_graphs: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub frobenius: Option<FrobeniusReport>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }

    fn failed(error: String) -> Self {
        ConstructionReport {
            order: String::new(),
            expected_order: String::new(),
            profile: intransitive_profile(0),
            socle_block_size: None,
            overgroup: None,
            only_trivial_invariant_graphs: None,
            frobenius: None,
            checks: Vec::new(),
            error: Some(error),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReport {
    pub index: usize,
    pub entry: AtlasEntry,
    pub seed: u64,
    pub arithmetic: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub construction: Option<ConstructionReport>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablesReport {
    pub max_degree: u64,
    pub seed: u64,
    pub rows_checked: usize,
    pub rows_constructed: usize,
    pub rows: Vec<RowReport>,
    /// One line per failing check, `row: check (detail)`.
    pub failures: Vec<String>,
    pub passed: bool,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        check: name.to_string(),
        passed,
        detail,
    }
}

/// Per-row seed: independent of the row's position in the listing.
pub fn row_seed(seed: u64, entry: &AtlasEntry) -> u64 {
    // FNV-1a over the row label
    let h = entry.label().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    });
    seed ^ h
}

pub fn verify_tables(opts: &TablesOptions) -> TablesReport {
    let rows = list_rows(opts.max_degree);
    let reports: Vec<RowReport> = rows
        .par_iter()
        .enumerate()
        .map(|(i, e)| verify_row(i, e, opts.seed, opts.budget))
        .collect();
    let mut failures = Vec::new();
    for r in &reports {
        let label = r.entry.label();
        let checks = r
            .arithmetic
            .checks
            .iter()
            .chain(r.construction.iter().flat_map(|c| c.checks.iter()));
        for c in checks.filter(|c| !c.passed) {
            failures.push(format!("{label}: {} ({})", c.check, c.detail));
        }
        if let Some(err) = r.construction.as_ref().and_then(|c| c.error.as_ref()) {
            failures.push(format!("{label}: construction failed ({err})"));
        }
    }
    TablesReport {
        max_degree: opts.max_degree,
        seed: opts.seed,
        rows_checked: reports.len(),
        rows_constructed: reports.iter().filter(|r| r.construction.is_some()).count(),
        passed: failures.is_empty(),
        failures,
        rows: reports,
    }
}

pub fn verify_row(index: usize, entry: &AtlasEntry, seed: u64, budget: SearchBudget) -> RowReport {
    let seed = row_seed(seed, entry);
    let arithmetic = validate_row_arithmetic(entry);
    let construction = entry.constructible.then(|| construct_and_check(entry, seed, budget));
    let passed = arithmetic.passed() && construction.as_ref().is_none_or(ConstructionReport::passed);
    RowReport {
        index,
        entry: entry.clone(),
        seed,
        arithmetic,
        construction,
        passed,
    }
}

fn chain_from_zero(g: &PermGroup, seed: u64) -> StabilizerChain {
    StabilizerChain::build_with(
        g,
        seed,
        &ChainOptions {
            base_prefix: vec![0],
            ..Default::default()
        },
    )
}

fn stabilizer_of_zero(g: &PermGroup, chain: &StabilizerChain) -> PermGroup {
    let gens = chain.stabilizer_generators(1);
    if gens.is_empty() {
        PermGroup::trivial(g.degree())
    } else {
        PermGroup::new(gens).expect("same degree")
    }
}

fn overgroup_report(entry: &AtlasEntry, seed: u64) -> Result<Option<OvergroupReport>, String> {
    let Some(action) = primitive_overgroup(entry, seed).map_err(|e| e.to_string())? else {
        return Ok(None);
    };
    let g = &action.target;
    let chain = chain_from_zero(g, seed);
    let profile = classify_with_stabilizer(g, &stabilizer_of_zero(g, &chain));
    let socle = PermGroup::new(g.generators()[..OVERGROUP_SOCLE_GENERATORS].to_vec()).expect("same degree");
    Ok(Some(OvergroupReport {
        label: g.label().to_string(),
        order: chain.order().to_string(),
        profile,
        socle_order: StabilizerChain::build(&socle, seed).order().to_string(),
        socle_transitive: socle.is_transitive(),
    }))
}

/// Builds one row and checks it against its table.
pub fn construct_and_check(entry: &AtlasEntry, seed: u64, budget: SearchBudget) -> ConstructionReport {
    let action = match build(entry, seed) {
        Ok(a) => a,
        Err(e) => return ConstructionReport::failed(e.to_string()),
    };
    let g = &action.target;
    let chain = chain_from_zero(g, seed);
    let profile = classify_with_stabilizer(g, &stabilizer_of_zero(g, &chain));
    let expected: BigUint = entry.socle_order();
    let mut checks = vec![
        check(
            "degree = pq",
            g.degree() as u64 == entry.degree,
            format!("degree {}", g.degree()),
        ),
        check("transitive", profile.transitive, format!("rank {}", profile.rank)),
        check(
            "order = socle order",
            chain.order() == &expected,
            format!("|G| = {}, closed form {expected}", chain.order()),
        ),
    ];
    let mut report = ConstructionReport {
        order: chain.order().to_string(),
        expected_order: expected.to_string(),
        profile: profile.clone(),
        socle_block_size: None,
        overgroup: None,
        only_trivial_invariant_graphs: None,
        frobenius: None,
        checks: Vec::new(),
        error: None,
    };
    match entry.table_source {
        TableSource::Prop1 => {
            checks.push(check(
                "2-transitive",
                profile.two_transitive,
                format!("suborbits {:?}", profile.suborbit_lengths),
            ));
            let dichotomy = theorem2_check(g).unwrap_or(false);
            report.only_trivial_invariant_graphs = Some(dichotomy);
            checks.push(check(
                "invariant graphs are empty or complete",
                dichotomy,
                format!(
                    "{} edges in the nontrivial orbital graph",
                    g.degree() * (g.degree() - 1) / 2
                ),
            ));
        }
        TableSource::Table1 | TableSource::Table2 => {
            if profile.uniprimitive {
                checks.push(check(
                    "uniprimitive with this socle",
                    true,
                    format!("socle action primitive of rank {}", profile.rank),
                ));
            } else {
                report.socle_block_size = find_nontrivial_blocks(g).map(|b| b.block_size);
                match overgroup_report(entry, seed) {
                    Ok(Some(over)) => {
                        let ok = over.profile.uniprimitive
                            && over.socle_transitive
                            && over.socle_order == report.expected_order;
                        checks.push(check(
                            "uniprimitive with this socle",
                            ok,
                            format!(
                                "socle action has blocks of size {}; {} of order {} is {} of rank {}",
                                report.socle_block_size.unwrap_or(0),
                                over.label,
                                over.order,
                                if over.profile.uniprimitive {
                                    "uniprimitive"
                                } else {
                                    "not uniprimitive"
                                },
                                over.profile.rank
                            ),
                        ));
                        report.overgroup = Some(over);
                    }
                    Ok(None) => checks.push(check(
                        "uniprimitive with this socle",
                        false,
                        format!("primitive {}, rank {}", profile.primitive, profile.rank),
                    )),
                    Err(e) => checks.push(check("uniprimitive with this socle", false, format!("overgroup: {e}"))),
                }
            }
        }
    }
    if entry.table_source == TableSource::Table2 {
        let frob = match find_regular_frobenius_in(g, &chain, entry.p, entry.q, seed, budget) {
            Ok(Some(cert)) => {
                let v = verify_certificate(g, &cert);
                FrobeniusReport {
                    verified: v.passed(),
                    failed_check: v.first_failure().map(|l| l.check.clone()),
                    certificate: Some(cert),
                }
            }
            Ok(None) => FrobeniusReport {
                certificate: None,
                verified: false,
                failed_check: Some("search budget exhausted".into()),
            },
            Err(e) => FrobeniusReport {
                certificate: None,
                verified: false,
                failed_check: Some(e.to_string()),
            },
        };
        checks.push(check(
            "regular Frobenius subgroup of order pq",
            frob.verified,
            match (&frob.certificate, &frob.failed_check) {
                (Some(c), None) => format!("x^y = x^{} verified independently", c.r),
                (_, Some(f)) => f.clone(),
                (None, None) => String::new(),
            },
        ));
        report.frobenius = Some(frob);
    }
    report.checks = checks;
    report
}
