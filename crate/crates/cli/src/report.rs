//! Serializable reports and their text mirrors. Hyperplanes are numbered from 1.

use serde::Serialize;

use hyperpart::exact::format_rational;
use hyperpart::fixtures::Fixture;
use hyperpart::homology::{
    concurrent_triples, dual_basis_check, dual_basis_check_all, epsilon, os_relation_defects, DualCheck, IndexTuple,
    PairingMatrix,
};
use hyperpart::io::{chamber_records, ArrangementFile, FlagFile};
use hyperpart::partition::{PartitionReport, PieceAssignment, StarReport};
use hyperpart::stratify::StratumReport;
use hyperpart::{Analysis, Arrangement, ChamberSet, Flag, IntersectionPoset, SignVector, Violation};

pub fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn rationals(v: &[hyperpart::Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Conventional chamber names for fixtures.
pub struct Labels {
    pairs: Vec<(String, SignVector)>,
}

impl Labels {
    pub fn new(fixture: Option<&Fixture>) -> Self {
        Labels { pairs: fixture.map(|f| f.chamber_labels.clone()).unwrap_or_default() }
    }

    pub fn get(&self, signs: &SignVector) -> Option<String> {
        self.pairs.iter().find(|(_, s)| s == signs).map(|(l, _)| l.clone())
    }

    /// Fixture label, or `#id`.
    pub fn name(&self, an_chambers: &ChamberSet, id: usize) -> String {
        self.get(&an_chambers.get(id).signs).unwrap_or_else(|| format!("#{id}"))
    }
}

pub struct Emit {
    json: bool,
}

impl Emit {
    pub fn new(json: bool) -> Self {
        Emit { json }
    }

    fn json<T: Serialize>(&self, value: &T) {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    }

    pub fn fixture(&self, fx: &Fixture, arrangement: bool, flag: bool) {
        #[derive(Serialize)]
        struct Both {
            arrangement: ArrangementFile,
            flag: FlagFile,
        }
        match (arrangement, flag) {
            (true, true) => self.json(&Both {
                arrangement: ArrangementFile::from_arrangement(&fx.arrangement),
                flag: FlagFile::from_flag(&fx.flag),
            }),
            (true, false) => self.json(&ArrangementFile::from_arrangement(&fx.arrangement)),
            _ => self.json(&FlagFile::from_flag(&fx.flag)),
        }
    }

    pub fn poset(&self, arr: &Arrangement, poset: &IntersectionPoset) {
        #[derive(Serialize)]
        struct FlatRow {
            id: usize,
            dim: usize,
            support: Vec<usize>,
            moebius: i64,
        }
        #[derive(Serialize)]
        struct PosetReport {
            dim: usize,
            hyperplanes: usize,
            flats: Vec<FlatRow>,
            betti: Vec<u64>,
        }
        let report = PosetReport {
            dim: arr.dim(),
            hyperplanes: arr.len(),
            flats: poset
                .flats()
                .iter()
                .map(|f| FlatRow { id: f.id, dim: f.dim(), support: one_based(&f.support), moebius: poset.moebius(f.id) })
                .collect(),
            betti: poset.betti_numbers(),
        };
        if self.json {
            return self.json(&report);
        }
        println!("{:>4} {:>4} {:>8}  support", "id", "dim", "moebius");
        for f in &report.flats {
            println!("{:>4} {:>4} {:>8}  {:?}", f.id, f.dim, f.moebius, f.support);
        }
        println!("betti {:?}", report.betti);
    }

    pub fn chambers(&self, chambers: &ChamberSet, labels: &Labels) {
        for r in chamber_records(chambers) {
            if self.json {
                println!("{}", serde_json::to_string(&r).expect("serializable"));
            } else {
                let label = labels.get(&chambers.get(r.id).signs).unwrap_or_default();
                println!("{:>4} {} {:<4} {}", r.id, r.signs, label, rationals(&r.interior_point));
            }
        }
    }

    pub fn betti(&self, poset: &IntersectionPoset) {
        #[derive(Serialize)]
        struct BettiReport {
            betti: Vec<u64>,
            total: u64,
        }
        let report = BettiReport { betti: poset.betti_numbers(), total: poset.total_moebius() };
        if self.json {
            return self.json(&report);
        }
        let parts: Vec<String> = report.betti.iter().map(u64::to_string).collect();
        println!("{}", parts.join(" "));
        println!("total {}", report.total);
    }

    pub fn flag(&self, flag: &Flag) {
        if self.json {
            return self.json(&FlagFile::from_flag(flag));
        }
        for (q, h) in flag.forms().iter().enumerate() {
            println!("h_{} = {h}", q + 1);
        }
    }

    pub fn flag_check(&self, violation: Option<&Violation>) {
        #[derive(Serialize)]
        struct FlagCheck {
            ok: bool,
            violation: Option<Violation>,
        }
        let violation = violation.cloned().map(|v| match v {
            Violation::NotGeneric { flat, q, expected, actual } => {
                Violation::NotGeneric { flat: one_based(&flat), q, expected, actual }
            }
            Violation::HeightCollision { q, first, second, height } => {
                Violation::HeightCollision { q, first: one_based(&first), second: one_based(&second), height }
            }
            other => other,
        });
        if self.json {
            return self.json(&FlagCheck { ok: violation.is_none(), violation });
        }
        match violation {
            None => println!("flag ok"),
            Some(v) => println!("flag rejected: {v}"),
        }
    }

    pub fn strata(&self, an: &Analysis, labels: &Labels) {
        #[derive(Serialize)]
        struct Row {
            #[serde(skip_serializing_if = "Option::is_none")]
            label: Option<String>,
            signs: String,
            #[serde(flatten)]
            report: StratumReport,
        }
        #[derive(Serialize)]
        struct StrataReport {
            level_sizes: Vec<usize>,
            strata: Vec<Row>,
        }
        let rows: Vec<Row> = an
            .strata
            .iter()
            .map(|s| {
                let mut report = StratumReport::new(s, &an.poset);
                report.flat_support = one_based(&report.flat_support);
                report.tilde_subset = one_based(&report.tilde_subset);
                Row { label: labels.get(&s.signs), signs: s.signs.to_string(), report }
            })
            .collect();
        let report = StrataReport { level_sizes: an.strata.level_sizes(), strata: rows };
        if self.json {
            return self.json(&report);
        }
        println!("level sizes {:?}", report.level_sizes);
        println!("{:>6} {:>2} {:<10} {:>8}  {:<12} tilde", "chamber", "q", "X_C", "height", "p_C");
        for r in &report.strata {
            let name = r.label.clone().unwrap_or_else(|| format!("#{}", r.report.chamber));
            let support = if r.report.flat_support.is_empty() {
                "R^l".to_string()
            } else {
                r.report.flat_support.iter().map(|i| format!("H{i}")).collect::<Vec<_>>().join("∩")
            };
            let height = r.report.height.as_ref().map(format_rational).unwrap_or_else(|| "-".into());
            println!(
                "{:>6} {:>2} {:<10} {:>8}  {:<12} {:?}:{}",
                name,
                r.report.q,
                support,
                height,
                rationals(&r.report.base_point),
                r.report.tilde_subset,
                r.report.tilde_signs
            );
        }
    }

    pub fn assignment(&self, an: &Analysis, a: &PieceAssignment, labels: &Labels) {
        #[derive(Serialize)]
        struct Witness {
            separating: Vec<usize>,
            flat_support: Vec<usize>,
            parallel_to_v: Vec<usize>,
        }
        #[derive(Serialize)]
        struct Assignment<'a> {
            point: &'a hyperpart::GaussPoint,
            chamber: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            label: Option<String>,
            signs: String,
            level: usize,
            witness: Witness,
            #[serde(skip_serializing_if = "Option::is_none")]
            diagnostic: &'a Option<String>,
        }
        let signs = &an.chamber(a.chamber).signs;
        let report = Assignment {
            point: &a.point,
            chamber: a.chamber,
            label: labels.get(signs),
            signs: signs.to_string(),
            level: a.level,
            witness: Witness {
                separating: one_based(&a.witness.separating),
                flat_support: one_based(&a.witness.flat_support),
                parallel_to_v: one_based(&a.witness.parallel_to_v),
            },
            diagnostic: &a.diagnostic,
        };
        if self.json {
            return self.json(&report);
        }
        println!(
            "{} + i{} lies in S({}) at level {}",
            rationals(&a.point.x),
            rationals(&a.point.v),
            labels.name(&an.chambers, a.chamber),
            a.level
        );
        println!("  separating hyperplanes {:?}, all transverse to v", report.witness.separating);
        println!("  X_C support {:?}, tangent to v", report.witness.flat_support);
    }

    pub fn partition_report(&self, r: &PartitionReport, labels: &Labels, an: &Analysis) {
        if self.json {
            return self.json(r);
        }
        println!("{} samples, {} violations, {} brute-force only", r.samples, r.violations.len(), r.fallbacks);
        for (c, n) in &r.counts {
            println!("  {:>6} {n}", labels.name(&an.chambers, *c));
        }
        for v in &r.violations {
            println!("  sample {}: {}", v.index, v.message);
        }
    }

    pub fn star_report(&self, r: &StarReport) {
        if self.json {
            return self.json(r);
        }
        println!("{} members over {} pieces, {} violations", r.checked, r.per_piece.len(), r.violations.len());
        for v in &r.violations {
            println!("  {}", v.message);
        }
    }

    pub fn homology_report(&self, r: &HomologyReport) {
        if self.json {
            return self.json(r);
        }
        for m in &r.matrices {
            println!("level {}: {}x{} {}", m.matrix.level, m.matrix.len(), m.matrix.len(), if m.ok { "ok" } else { "FAILED" });
        }
        println!("dual identity: {} tuples, {} failures", r.tuples_checked, r.dual_failures.len());
        println!("concurrent triples: {}, defects {}", r.triples, r.relation_defects.len());
        println!("{}", if r.passed { "passed" } else { "FAILED" });
    }

    pub fn matrix(&self, m: &PairingMatrix, an: &Analysis, labels: &Labels) {
        #[derive(Serialize)]
        struct MatrixReport<'a> {
            #[serde(flatten)]
            matrix: &'a PairingMatrix,
            labels: Vec<String>,
            upper_triangular: bool,
            diagonal: Option<i64>,
            determinant: String,
        }
        let names: Vec<String> = m.chambers.iter().map(|&c| labels.name(&an.chambers, c)).collect();
        let report = MatrixReport {
            matrix: m,
            labels: names.clone(),
            upper_triangular: m.is_upper_triangular(),
            diagonal: m.constant_diagonal(),
            determinant: format_rational(&m.determinant()),
        };
        if self.json {
            return self.json(&report);
        }
        let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(1).max(2);
        print!("{:>width$}", "");
        for n in &names {
            print!(" {n:>width$}");
        }
        println!();
        for (n, row) in names.iter().zip(&m.entries) {
            print!("{n:>width$}");
            for x in row {
                print!(" {x:>width$}");
            }
            println!();
        }
        println!("determinant {}", report.determinant);
    }

    pub fn os_map(&self, r: &OsMapReport) {
        if self.json {
            return self.json(r);
        }
        println!("I = {:?}, independent {}, epsilon {}", r.indices, r.independent, r.epsilon);
        if r.class.is_empty() {
            println!("  zero class");
        }
        for t in &r.class {
            println!("  {:+} [cl S({})]", t.coefficient, t.name);
        }
        println!("dual identity {}", if r.dual_check_holds { "holds" } else { "FAILS" });
    }
}

#[derive(Serialize)]
pub struct CheckedMatrix {
    #[serde(flatten)]
    pub matrix: PairingMatrix,
    pub ok: bool,
}

pub type RelationDefect = ([usize; 3], Vec<(usize, i64)>);

#[derive(Serialize)]
pub struct HomologyReport {
    pub matrices: Vec<CheckedMatrix>,
    pub tuples_checked: usize,
    pub dual_failures: Vec<DualCheck>,
    pub triples: usize,
    /// Triples (numbered from 1) with the chambers where the relation pairs nonzero.
    pub relation_defects: Vec<RelationDefect>,
    pub passed: bool,
}

impl HomologyReport {
    pub fn build(an: &Analysis) -> hyperpart::Result<Self> {
        let matrices: Vec<CheckedMatrix> = (0..=an.dim())
            .map(|q| {
                PairingMatrix::build(an, q).map(|m| {
                    let ok = m.is_unimodular_triangular(an.dim());
                    CheckedMatrix { matrix: m, ok }
                })
            })
            .collect::<hyperpart::Result<_>>()?;
        let (tuples_checked, dual_failures) = dual_basis_check_all(an)?;
        let mut triples = 0;
        let mut relation_defects = Vec::new();
        for t in concurrent_triples(&an.arrangement)? {
            triples += 1;
            let d = os_relation_defects(an, t)?;
            if !d.is_empty() {
                relation_defects.push(([t[0] + 1, t[1] + 1, t[2] + 1], d));
            }
        }
        let passed = matrices.iter().all(|m| m.ok) && dual_failures.is_empty() && relation_defects.is_empty();
        Ok(HomologyReport { matrices, tuples_checked, dual_failures, triples, relation_defects, passed })
    }
}

#[derive(Serialize)]
pub struct ClassTerm {
    pub chamber: usize,
    pub name: String,
    pub signs: String,
    pub coefficient: i64,
}

#[derive(Serialize)]
pub struct OsMapReport {
    pub indices: Vec<usize>,
    pub independent: bool,
    pub epsilon: i64,
    pub level: usize,
    pub class: Vec<ClassTerm>,
    /// `(chamber, pairing with the class, integral of the form)` per level-q chamber.
    pub pairings: Vec<(usize, i64, i64)>,
    pub dual_check_holds: bool,
}

impl OsMapReport {
    pub fn build(an: &Analysis, tuple: &IndexTuple, labels: &Labels) -> hyperpart::Result<Self> {
        let check = dual_basis_check(an, tuple)?;
        let class = check
            .class
            .coefficients
            .iter()
            .map(|(&c, &k)| ClassTerm {
                chamber: c,
                name: labels.name(&an.chambers, c),
                signs: an.chamber(c).signs.to_string(),
                coefficient: k,
            })
            .collect();
        Ok(OsMapReport {
            indices: one_based(tuple.indices()),
            independent: tuple.is_independent(),
            epsilon: epsilon(&an.arrangement, &an.flag, tuple)?,
            level: tuple.len(),
            class,
            pairings: check.rows.clone(),
            dual_check_holds: check.holds() && (tuple.is_independent() || check.class.is_zero()),
        })
    }
}
