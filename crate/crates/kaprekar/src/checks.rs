//! The reference results, one check per item. Each returns a verdict and a
//! short account of what was compared.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::ParamDomain;
use crate::digits::{iterate, kaprekar_step, params, DigitNumber};
use crate::dynamics::{build_graph, build_graph_with, cycles, distance_to};
use crate::equivalence::expr::{parse_constraints, parse_map};
use crate::equivalence::{
    catalog_r2, group_classify, higher_equiv_examples, partition, partition_in, r_equiv, set_members, stabilize_in,
    verify_catalog, EquivMap, EquivSet, GroupKind, ProductResult,
};
use crate::params::{apply_f, enumerate_classes, ParamVector};
use crate::symbolic::{
    derive_k_functions, derive_with, eval_k, solve_fixed_points, total_k, verify_constant_family, ConstantFamily,
    DeriveOptions, Permutation, SymbolicKFn,
};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Tally {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, id: usize, name: &'static str) -> CheckResult {
        let mut detail = String::new();
        if !self.failures.is_empty() {
            let _ = write!(detail, "failed: {}", self.failures.join("; "));
        }
        if !self.notes.is_empty() {
            if !detail.is_empty() {
                detail.push_str(" | ");
            }
            detail.push_str(&self.notes.join("; "));
        }
        CheckResult {
            id,
            name,
            passed: self.failures.is_empty(),
            detail,
        }
    }
}

fn num(s: &str) -> DigitNumber {
    DigitNumber::parse(s).expect("reference numbers are valid")
}

fn pv(s: &str, w: usize) -> ParamVector {
    ParamVector::parse(s, w).expect("reference classes are valid")
}

fn func(w: usize, k: usize, perm: &str) -> SymbolicKFn {
    let p: Permutation = perm.parse().expect("reference orderings are valid");
    SymbolicKFn::from_ordering(w, k, &p).expect("reference orderings fit their family")
}

pub fn worked_examples() -> CheckResult {
    let mut t = Tally::new();
    let n = num("83246529");
    t.expect(iterate(&n, 1) == num("76308633"), || "K(83246529)".into());
    t.expect(iterate(&n, 2) == num("84326652"), || "K^2(83246529)".into());
    for (a, w, img) in [("632", 6, "631764"), ("550", 6, "549945"), ("75421", 11, "75420987543")] {
        let got = apply_f(&pv(a, w));
        t.expect(got == num(img), || format!("f({a}) = {got}"));
    }
    // (label, width, nonzero count, ordering, input, output)
    let cases = [
        ("K1", 12, 6, "1.2.3.4.5.6.7.8.9.10.11.12", "877655", "655310"),
        ("K1", 7, 3, "123456", "865", "752"),
        ("K2", 6, 3, "456123", "541", "810"),
        ("K2", 7, 3, "456123", "432", "842"),
        ("K21", 10, 2, "1234", "85000", "75510"),
        ("K22", 6, 2, "1234", "850", "754"),
        ("K23", 8, 2, "1423", "5500", "5544"),
        ("K25", 12, 5, "6.1.7.2.3.8.9.10.4.5", "655310", "964220"),
    ];
    for (label, w, k, perm, a, b) in cases {
        let f = func(w, k, perm);
        let alpha = pv(a, w);
        let got = eval_k(&f, &alpha);
        t.expect(got.as_ref().ok() == Some(&pv(b, w)), || {
            format!("{label}({a}) = {got:?}")
        });
        t.expect(total_k(&alpha) == pv(b, w), || {
            format!("{label}({a}) disagrees with the routine")
        });
    }
    t.note(format!("{} symbolic evaluations", cases.len()));
    t.finish(1, "worked examples")
}

fn every_number(w: usize) -> impl ParallelIterator<Item = DigitNumber> {
    (0..10u64.pow(w as u32)).into_par_iter().filter_map(move |mut v| {
        let mut d = vec![0u8; w];
        for slot in d.iter_mut().rev() {
            *slot = (v % 10) as u8;
            v /= 10;
        }
        DigitNumber::from_digits(d).ok()
    })
}

pub fn kaprekar_constants() -> CheckResult {
    const CAP: usize = 20;
    let mut t = Tally::new();
    for (w, target) in [(3, "495"), (4, "6174")] {
        let target = num(target);
        let misses = every_number(w)
            .filter(|n| {
                let mut x = n.clone();
                for _ in 0..CAP {
                    if x == target {
                        return false;
                    }
                    x = kaprekar_step(&x);
                }
                x != target
            })
            .count();
        t.expect(misses == 0, || format!("{misses} numbers of width {w} miss {target}"));
    }
    t.note(format!("iteration cap {CAP}"));
    t.finish(2, "Kaprekar constants")
}

pub fn fixed_point_sets() -> CheckResult {
    let mut t = Tally::new();
    let expected: [(usize, &[&str]); 4] = [(2, &[]), (3, &["495"]), (4, &["6174"]), (6, &["631764", "549945"])];
    for (w, want) in expected {
        let got: BTreeSet<String> = solve_fixed_points(w).iter().map(|f| f.n_e.to_string()).collect();
        let want: BTreeSet<String> = want.iter().map(|s| s.to_string()).collect();
        t.expect(got == want, || format!("width {w}: {got:?}"));
    }
    for (kind, h, want) in [
        (ConstantFamily::Even, 4, "63317664"),
        (ConstantFamily::Odd, 4, "864197532"),
        (ConstantFamily::Odd, 7, "864333197666532"),
    ] {
        let got = verify_constant_family(kind, h).map(|f| f.n_e.to_string());
        t.expect(got.as_deref() == Ok(want), || format!("{kind:?} h={h}: {got:?}"));
    }
    for (w, want) in [(8, "63317664"), (9, "864197532")] {
        let found = solve_fixed_points(w).iter().any(|f| f.n_e.to_string() == want);
        t.expect(found, || format!("{want} missing from the solved set at width {w}"));
    }
    t.finish(3, "fixed points by width")
}

pub fn cycle_structure() -> CheckResult {
    let mut t = Tally::new();
    let c2 = cycles(2);
    t.expect(c2.len() == 1 && c2[0].len() == 5, || {
        format!("width 2 attractors {:?}", lens(&c2))
    });
    let mut l5 = lens(&cycles(5));
    l5.sort_unstable();
    t.expect(l5 == [2, 4, 4], || format!("width 5 lengths {l5:?}"));

    let members: Vec<ParamVector> = ["861", "863", "643", "421", "852", "751", "841"]
        .iter()
        .map(|s| pv(s, 6))
        .collect();
    let numbers = ["840852", "860832", "862632", "642654", "420876", "851742", "750843"];
    let c6 = cycles(6);
    match c6.iter().find(|c| c.contains(&members[0])) {
        Some(c) => {
            t.expect(c.matches_cyclically(&members), || {
                format!("width 6 cycle order {:?}", c.members)
            });
            let start = c.members.iter().position(|m| *m == members[0]).unwrap_or(0);
            let aligned = (0..c.len()).all(|i| c.numeric_members[(start + i) % c.len()].to_string() == numbers[i]);
            t.expect(aligned, || format!("width 6 numeric members {:?}", c.numeric_members));
        }
        None => t.expect(false, || "861 is not on a cycle".into()),
    }
    let g7 = build_graph(7);
    t.expect(
        g7.components.len() == 1 && g7.components[0].cycle.len() == 8 && g7.components[0].size() == 219,
        || {
            format!(
                "width 7 components {:?}",
                g7.components
                    .iter()
                    .map(|c| (c.size(), c.cycle.len()))
                    .collect::<Vec<_>>()
            )
        },
    );
    t.finish(4, "cycle structure")
}

fn lens(cs: &[crate::dynamics::Cycle]) -> Vec<usize> {
    cs.iter().map(|c| c.len()).collect()
}

pub fn class_counts() -> CheckResult {
    let mut t = Tally::new();
    for w in [6, 7] {
        let n = enumerate_classes(w).len();
        t.expect(n == 219, || format!("width {w}: {n} classes"));
    }
    let sizes: Vec<usize> = build_graph(6).components.iter().map(|c| c.size()).collect();
    t.expect(sizes == [201, 17, 1], || format!("width 6 component sizes {sizes:?}"));
    t.finish(5, "class counts and components")
}

/// A printed `K_i` row: label, width, nonzero count, output, domain.
type Row = (&'static str, usize, usize, &'static str, &'static str);

const TABLE_ROWS: &[Row] = &[
    ("K1", 6, 3, "2a-10, 2b-9, 2c-10", "6<=a<=9, 5<=b<=9, 5<=c<=9, a>=b+1"),
    (
        "K2",
        6,
        3,
        "10-2c, 9-2b, 10-2a",
        "0<a<=5, 0<b<=4, 0<c<=4, a>=b+1, 2c<=2b+1",
    ),
    (
        "K3",
        6,
        3,
        "10-2c, a-b, a-b-1",
        "9<=a+b<=10, a>=b+1, 1<=c<=4, a+c<=9, a<=10+b-2c",
    ),
    (
        "K4",
        6,
        3,
        "a-c+1, a-c-1, 2b-9",
        "5<=a<=9, 5<=b<=8, 1<=c<=6, a>=b+1, 9<=a+c<=11, a>=2b+c-8",
    ),
    (
        "K5",
        6,
        3,
        "a-c+1, a-c-1, 9-2b",
        "6<=a<=9, 1<=b<=4, a+b>=10, 9<=a+c<=11, a>=10-2b+c",
    ),
    (
        "K6",
        6,
        3,
        "10-2c, 2a-10, 2b-9",
        "6<=a<=9, 5<=b<=9, 1<=c<=3, a>=b+1, a+c<=9",
    ),
    (
        "K7",
        6,
        3,
        "2a-10, b-c+1, b-c",
        "6<=a<=9, 5<=b<=8, 2<=c<=5, a+c>=11, 9<=b+c<=10, 2a>=11+b-c",
    ),
    (
        "K8",
        6,
        3,
        "a-c+1, a+b-10, b-c",
        "6<=a<=9, 5<=b<=8, 1<=c<=5, a>=b+1, a+b>=10, 10<=a+c<=11, 9<=b+c<=11",
    ),
    ("K9", 6, 3, "11-a-c, a+b-9, b+c-9", "a=5, b=5, c=4"),
    ("K22", 6, 2, "a-1, b, a-b+1", "6<=a<=9, 5<=b<=9, a>=b+1, 2b>=a+1"),
    ("K24", 6, 2, "b, 10-b, 2a-10", "5<=a<=9, 5<=b<=9, a+b<=11"),
    ("K31", 6, 1, "a-1, 10-a, 0", "6<=a<=9"),
    ("K32", 6, 1, "10-a, a-1, 0", "0<=a<=5"),
    ("K1", 7, 3, "a-1, a+b-9, b+c-9", "a>=b+1, c>=5"),
    ("K4", 7, 3, "10-c, 2a-10, b-c", "a>=b+1, 9<=a+c<=11, b>=5, b+c<=9"),
    ("K5", 7, 3, "10-c, 2a-10, 9-b-c", "a+b>=10, b<=4, 9<=a+c<=11"),
    ("K6", 7, 3, "10-c, a-c-1, a+b-9", "a>=b+1, b>=5, a+c<=9"),
    ("K7", 7, 3, "a-1, a-c+1, 2b-9", "a+c>=11, 9<=b+c<=10"),
    ("K10", 7, 3, "b, 2a-10, b+c-9", "a>=c+1, a<=b+1, c>=5"),
    ("K11", 7, 3, "10-c, 9-c-b, a-b-1", "a>=5, a+b<=9"),
    ("K12", 7, 3, "a-1, a-c+1, 9-b-c", "a+c>=11, b<=4"),
    ("K13", 7, 3, "b, 2a-10, b-c+1", "a<=b+1, a+c>=11, c<=5"),
    ("K22", 7, 2, "a-1, b, 10-b", "a>=b+1, b>=5"),
    ("K23", 7, 2, "b, a-1, 10-b", "a<=b+1, a+b>=11"),
    ("K25", 7, 2, "a-1, 10-b, b", "a+b>=11, b<=5"),
    ("K26", 7, 2, "10-b, a-1, b", "a>=b+1, 9<=a+b<=11"),
    ("K27", 7, 2, "10-b, a-1, 9-a", "a>=5, a+b<=9"),
    ("K31", 7, 1, "a-1, 10-a, 0", "6<=a<=9"),
    ("K32", 7, 1, "10-a, a-1, 0", "0<=a<=5"),
];

/// Rows as printed with the inequality the other way round; the routine
/// refutes them.
const REFUTED_ROWS: &[Row] = &[
    ("K23", 7, 2, "b, a-1, 10-b", "a<=b+1, a+b<=11"),
    ("K25", 7, 2, "a-1, 10-b, b", "a+b<=11, b<=5"),
];

/// Outcome of matching one printed row against the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowMatch {
    pub label: &'static str,
    pub width: usize,
    pub entry: Option<String>,
    pub listed: usize,
    /// Listed classes where the formula disagrees with the routine.
    pub wrong_value: Vec<ParamVector>,
    /// Listed classes outside the named entry's domain.
    pub outside_entry: Vec<ParamVector>,
}

impl RowMatch {
    pub fn holds(&self) -> bool {
        self.entry.is_some() && self.listed > 0 && self.wrong_value.is_empty() && self.outside_entry.is_empty()
    }
}

fn match_row(row: &Row, catalogs: &HashMap<usize, crate::symbolic::Catalog>) -> RowMatch {
    let &(label, w, k, out, dom) = row;
    let h = crate::params::half_width(w);
    let mut d = ParamDomain::<Rational>::family(w, k);
    d.extend(parse_constraints(dom, h));
    let out = parse_map(out, h);
    let points = d.feasible_points();
    let entry = catalogs[&w].get(label);
    let wrong_value = points
        .iter()
        .filter(|a| {
            let want: Vec<Rational> = total_k(a).as_i64().into_iter().map(Rational::from).collect();
            out.iter().map(|e| e.eval_at(a)).collect::<Vec<_>>() != want
        })
        .cloned()
        .collect();
    let outside_entry = match entry {
        Some(f) => points
            .iter()
            .filter(|a| !f.feasible_points().contains(a))
            .cloned()
            .collect(),
        None => Vec::new(),
    };
    RowMatch {
        label,
        width: w,
        entry: entry.map(|f| f.id.clone()),
        listed: points.len(),
        wrong_value,
        outside_entry,
    }
}

/// Every printed row, checked pointwise; then the two refuted variants.
pub fn table_row_matches() -> (Vec<RowMatch>, Vec<RowMatch>) {
    let catalogs: HashMap<usize, _> = [6, 7].into_iter().map(|w| (w, derive_k_functions(w))).collect();
    (
        TABLE_ROWS.iter().map(|r| match_row(r, &catalogs)).collect(),
        REFUTED_ROWS.iter().map(|r| match_row(r, &catalogs)).collect(),
    )
}

pub fn symbolic_catalog() -> CheckResult {
    let mut t = Tally::new();
    for w in 2..=8 {
        let cat = derive_k_functions(w);
        let r = cat.check_against_oracle();
        t.expect(r.is_ok(), || {
            format!(
                "width {w}: {} uncovered, {} unsound",
                r.uncovered.len(),
                r.unsound.len()
            )
        });
        if w == 6 || w == 7 {
            let counts: Vec<String> = cat
                .counts
                .iter()
                .map(|c| format!("k{}={}/{}", c.nonzero, c.raw_orderings, c.entries))
                .collect();
            t.note(format!(
                "width {w} orderings/entries {} (reference 2/11/117)",
                counts.join(" ")
            ));
        }
    }
    let (rows, refuted) = table_row_matches();
    for m in &rows {
        t.expect(m.holds(), || format!("row {} at width {}: {m:?}", m.label, m.width));
    }
    for m in &refuted {
        t.expect(!m.wrong_value.is_empty(), || {
            format!("printed row {} at width {} was not refuted", m.label, m.width)
        });
    }
    t.note(format!(
        "{} rows matched, {} printed rows refuted",
        rows.len(),
        refuted.len()
    ));
    t.finish(6, "symbolic catalog")
}

pub fn second_order_partition() -> CheckResult {
    let mut t = Tally::new();
    let p = partition(6, 2);
    t.expect(p.len() == 82, || format!("{} blocks", p.len()));
    let a = pv("863", 6);
    let want: Vec<ParamVector> = ["863", "833", "762", "732", "332"].iter().map(|s| pv(s, 6)).collect();
    t.expect(p.block_containing(&a) == Some(want.as_slice()), || {
        format!("block of 863 {:?}", p.block_containing(&a))
    });
    t.expect(p.block_of(&a).map(|b| &p.images[b]) == Some(&pv("643", 6)), || {
        "image of the 863 block".into()
    });
    t.finish(7, "second-order partition")
}

pub fn stabilization() -> CheckResult {
    const LAST: usize = 13;
    let mut t = Tally::new();
    let g = build_graph(6);
    let tree = &g.components[0];
    let (u, fin) = stabilize_in(&g, &tree.nodes);
    t.expect(fin.len() == 7, || format!("{} final blocks", fin.len()));
    t.expect(u <= LAST, || format!("stable only from order {u}"));
    let at = partition_in(&g, LAST, &tree.nodes);
    for r in 1..=20 {
        let later = partition_in(&g, LAST + r, &tree.nodes);
        t.expect(later.blocks == at.blocks, || {
            format!("order {} differs from order {LAST}", LAST + r)
        });
    }
    let period = tree.cycle.len();
    for c in &tree.cycle.members {
        let want: Vec<ParamVector> = tree
            .nodes
            .iter()
            .map(|&v| g.nodes[v].clone())
            .filter(|a| distance_to(&g, a, c).is_some_and(|d| d % period == 0))
            .collect();
        t.expect(fin.block_containing(c) == Some(want.as_slice()), || {
            format!("final block of {c}")
        });
    }
    t.note(format!("stable from order {u}"));
    t.finish(8, "stabilization")
}

pub fn group_structure() -> CheckResult {
    let mut t = Tally::new();
    let group_one = [
        ["e2-0", "e2-1", "e2-2", "e2-3", "e2-4", "e2-5", "n2-6", "n2-7"],
        ["e2-1", "e2-0", "e2-4", "e2-5", "e2-2", "e2-3", "n2-7", "n2-6"],
        ["e2-2", "e2-4", "e2-0", "n2-6", "e2-1", "n2-7", "e2-3", "e2-5"],
        ["e2-3", "e2-5", "n2-6", "e2-0", "n2-7", "e2-1", "e2-2", "e2-4"],
        ["e2-4", "e2-2", "e2-1", "n2-7", "e2-0", "n2-6", "e2-5", "e2-3"],
        ["e2-5", "e2-3", "n2-7", "e2-1", "n2-6", "e2-0", "e2-4", "e2-2"],
        ["n2-6", "n2-7", "e2-3", "e2-2", "e2-5", "e2-4", "e2-0", "e2-1"],
        ["n2-7", "n2-6", "e2-5", "e2-4", "e2-3", "e2-2", "e2-1", "e2-0"],
    ];
    let group_two = [
        ["e2-0", "e2-8", "e2-9", "e2-10"],
        ["e2-8", "e2-0", "e2-10", "e2-9"],
        ["e2-9", "e2-10", "e2-0", "e2-8"],
        ["e2-10", "e2-9", "e2-8", "e2-0"],
    ];
    let same = |cells: &[Vec<crate::equivalence::ProductCell>], want: &[&[&str]]| {
        cells.len() == want.len()
            && cells.iter().zip(want).all(|(row, w)| {
                row.len() == w.len()
                    && row
                        .iter()
                        .zip(w.iter())
                        .all(|(c, id)| c.result == ProductResult::Element(id.to_string()))
            })
    };
    for w in [6, 7] {
        let one = group_classify(&set_members(EquivSet::I, w).expect("set I exists"));
        let rows: Vec<&[&str]> = group_one.iter().map(|r| r.as_slice()).collect();
        t.expect(same(&one.cells, &rows), || format!("set I table at width {w}"));
        t.expect(!one.closed && one.group.is_none(), || {
            format!("set I closed at width {w}")
        });
        let two = group_classify(&set_members(EquivSet::II, w).expect("set II exists"));
        let rows: Vec<&[&str]> = group_two.iter().map(|r| r.as_slice()).collect();
        t.expect(same(&two.cells, &rows), || format!("set II table at width {w}"));
        t.expect(two.group == Some(GroupKind::Klein), || {
            format!("set II is {:?} at width {w}", two.group)
        });
        let three = group_classify(&set_members(EquivSet::III, w).expect("set III exists"));
        let rows: Vec<&[&str]> = vec![&["e2-0", "e2-11"], &["e2-11", "e2-0"]];
        t.expect(same(&three.cells, &rows), || format!("set III table at width {w}"));
        t.expect(three.group == Some(GroupKind::Z2), || {
            format!("set III is {:?} at width {w}", three.group)
        });
    }
    t.finish(9, "group structure")
}

/// Pairs the named entries are known to relate: (width, entry, from, to).
const CATALOG_EXAMPLES: &[(usize, &str, &str, &str)] = &[
    (6, "e2-11", "300", "800"),
    (6, "r2-51", "500", "775"),
    (6, "r2-51", "700", "865"),
    (6, "r2-51", "900", "955"),
    (6, "r2-52", "200", "955"),
    (6, "r2-52", "400", "865"),
    (6, "r2-52", "600", "775"),
    (6, "e2-1x12", "963", "331"),
    (6, "e2-2x12", "963", "761"),
    (6, "e2-3x12", "221", "972"),
    (6, "e2-4x12", "933", "331"),
    (6, "n2-6x12", "772", "877"),
    (6, "n2-7x12", "333", "333"),
    (7, "e2-61", "986", "972"),
    (7, "e2-61", "975", "963"),
    (7, "e2-61", "875", "863"),
    (7, "e2-62", "986", "972"),
    (7, "e2-62", "985", "962"),
    (7, "e2-62", "966", "852"),
    (7, "e2-62", "875", "863"),
    (7, "e2-63", "981", "993"),
    (7, "e2-63", "971", "994"),
    (7, "e2-63", "972", "984"),
    (7, "e2-63", "961", "995"),
    (7, "e2-63", "962", "985"),
    (7, "e2-63", "872", "884"),
    (7, "e2-63", "862", "885"),
    (7, "e2-63", "863", "875"),
    (7, "e2-63", "763", "775"),
    (7, "e2-64", "931", "995"),
    (7, "e2-64", "921", "994"),
    (7, "e2-64", "911", "993"),
    (7, "e2-64", "932", "985"),
    (7, "e2-64", "922", "984"),
    (7, "e2-64", "832", "885"),
    (7, "e2-64", "822", "884"),
    (7, "e2-64", "833", "875"),
    (7, "e2-64", "733", "775"),
    (7, "e2-65", "720", "965"),
    (7, "e2-65", "630", "866"),
    (7, "e2-66", "630", "864"),
    (7, "e2-67", "610", "751"),
    (7, "e2-67", "520", "762"),
    (7, "e2-68", "710", "521"),
    (7, "e2-68", "620", "622"),
    (7, "e2-69", "730", "875"),
    (7, "e2-69", "720", "965"),
    (7, "e2-69", "630", "866"),
    (7, "e2-70", "930", "975"),
    (7, "e2-70", "840", "876"),
    (7, "e2-71", "880", "943"),
    (7, "e2-71", "770", "833"),
    (7, "e2-72", "770", "863"),
    (7, "e2-73", "960", "862"),
    (5, "e2-5-a5", "85", "73"),
    (5, "e2-5-a5", "96", "82"),
    (5, "e2-6-a5", "30", "43"),
    (5, "e2-7-a5", "40", "75"),
];

/// General-family instances with known pairs: (width, entry, from, to).
const FAMILY_EXAMPLES: &[(usize, &str, &str, &str)] = &[
    (11, "r2-12:k5:s3", "76632", "76332"),
    (10, "r2-15:k5:s2:r2", "75552", "74442"),
    (12, "r2-16:k6:r4", "555532", "554432"),
    (9, "r2-17:k4:r3", "8772", "2222"),
    (10, "r2-13:k3", "97400", "97600"),
    (10, "r2-4", "76641", "95333"),
];

/// The listed pairs that some named entry fails to produce.
pub fn catalog_example_failures() -> Vec<String> {
    let mut cats: HashMap<usize, Vec<EquivMap>> = HashMap::new();
    let mut bad = Vec::new();
    for &(w, id, a, b) in CATALOG_EXAMPLES.iter().chain(FAMILY_EXAMPLES) {
        let cat = cats.entry(w).or_insert_with(|| catalog_r2(w));
        let ok = cat
            .iter()
            .find(|m| m.id == id)
            .is_some_and(|m| m.maps(&pv(a, w), &pv(b, w)))
            && total_k(&pv(a, w)) == total_k(&pv(b, w));
        if !ok {
            bad.push(format!("{id}: {a} -> {b} at width {w}"));
        }
    }
    bad
}

pub fn r2_catalog() -> CheckResult {
    let mut t = Tally::new();
    for w in [5, 6, 7] {
        let r = verify_catalog(w);
        t.expect(r.is_sound(), || format!("width {w}: {} unsound pairs", r.unsound.len()));
        t.expect(r.invalid_inhabited.is_empty(), || {
            format!("width {w}: inhabited non-equivalences {:?}", r.invalid_inhabited)
        });
        if w == 7 {
            t.expect(r.is_complete(), || {
                let pieces: Vec<String> = r
                    .uncovered
                    .iter()
                    .map(|u| {
                        let p: Vec<String> = u
                            .pieces
                            .iter()
                            .map(|p| p.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
                            .collect();
                        format!("{} <- {{{}}}", u.image, p.join("} {"))
                    })
                    .collect();
                format!(
                    "width 7: {} blocks left split: {}",
                    r.uncovered.len(),
                    pieces.join("; ")
                )
            });
        }
        t.note(format!(
            "width {w}: {} entries, {} pairs, {} blocks",
            r.entries, r.pairs, r.blocks
        ));
    }
    let bad = catalog_example_failures();
    t.expect(bad.is_empty(), || {
        format!("listed pairs not produced: {}", bad.join(", "))
    });
    t.finish(10, "second-order catalog")
}

pub fn higher_order_facts() -> CheckResult {
    let mut t = Tally::new();
    for (a, b, r, want) in [
        ("83246529", "17487561", 1, true),
        ("8178382562", "4774473809", 2, true),
        ("5068069", "3071934", 4, true),
        ("5068069", "3071934", 3, false),
    ] {
        let got = r_equiv(&num(a), &num(b), r);
        t.expect(got == Ok(want), || format!("{a} R{r} {b}: {got:?}"));
    }
    let mut facts = 0;
    for w in [6, 7] {
        for f in higher_equiv_examples(w).expect("widths 6 and 7 have examples") {
            facts += 1;
            t.expect(f.is_new(), || {
                format!("{} ~ {} at order {} (width {w})", f.left, f.right, f.order)
            });
        }
    }
    let k6 = |s: &str| crate::symbolic::total_k_iter(&pv(s, 7), 6);
    t.expect(k6("533") == pv("864", 7) && k6("621") == pv("864", 7), || {
        "sixth images of 533 and 621".into()
    });
    t.note(format!("{facts} class-level facts"));
    t.finish(11, "higher-order facts")
}

pub fn property_suite() -> CheckResult {
    const SAMPLES: usize = 100_000;
    const SEED: u64 = 0x6174;
    let mut t = Tally::new();
    for w in 2..=7 {
        let bad = every_number(w)
            .filter(|n| {
                let img = kaprekar_step(n);
                !img.digit_sum().is_multiple_of(9) || apply_f(&params(n)) != img
            })
            .count();
        t.expect(bad == 0, || format!("width {w}: {bad} numbers fail"));
    }
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut sampled = 0;
    for _ in 0..SAMPLES {
        let w = rng.gen_range(8..=12);
        let digits: Vec<u8> = (0..w).map(|_| rng.gen_range(0..10)).collect();
        if let Ok(n) = DigitNumber::from_digits(digits) {
            sampled += 1;
            let img = kaprekar_step(&n);
            t.expect(img.digit_sum().is_multiple_of(9) && apply_f(&params(&n)) == img, || {
                format!("sample {n}")
            });
        }
    }
    for w in 2..=7 {
        let g = build_graph(w);
        let all: Vec<usize> = (0..g.nodes.len()).collect();
        let mut prev = partition_in(&g, 1, &all);
        for r in 2..=20 {
            let next = partition_in(&g, r, &all);
            t.expect(next.is_coarsening_of(&prev), || {
                format!("width {w}: order {r} splits a block")
            });
            prev = next;
        }
    }
    for w in [6, 7] {
        let par = build_graph_with(w, true);
        let seq = build_graph_with(w, false);
        t.expect(
            format!("{:?}", par.to_export()) == format!("{:?}", seq.to_export()),
            || format!("graph at width {w}"),
        );
        let a = derive_with(
            w,
            DeriveOptions {
                prune: true,
                parallel: true,
            },
        );
        let b = derive_with(
            w,
            DeriveOptions {
                prune: true,
                parallel: false,
            },
        );
        let show = |c: &crate::symbolic::Catalog| {
            c.functions
                .iter()
                .map(|f| format!("{} {:?} {:?}", f.id, f.output, f.domain))
                .collect::<Vec<_>>()
        };
        t.expect(show(&a) == show(&b), || format!("catalog at width {w}"));
        let p1 = format!("{:?}", partition(w, 2).to_export());
        let p2 = format!("{:?}", partition(w, 2).to_export());
        t.expect(p1 == p2, || format!("partition at width {w}"));
    }
    t.note(format!("{sampled} sampled numbers, seed {SEED:#x}"));
    t.finish(12, "property suite")
}

/// Every check, in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        worked_examples(),
        kaprekar_constants(),
        fixed_point_sets(),
        cycle_structure(),
        class_counts(),
        symbolic_catalog(),
        second_order_partition(),
        stabilization(),
        group_structure(),
        r2_catalog(),
        higher_order_facts(),
        property_suite(),
    ]
}

/// One line per check.
pub fn render(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(
            out,
            "{} {:>2} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.detail
        );
    }
    out
}
