//! One line per acceptance criterion, printed on every run.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hurwitz::expr::{parse_field, parse_form};
use hurwitz::extension::{
    check_extension, classify_level_pair, extend_tree, partition_trunk, solve_cartier, verify_cartier_solution, CartierVariant, CaseTag,
    ExtensionTarget,
};
use hurwitz::rational::{int, ratio, Rational};
use hurwitz::schema;
use hurwitz::tree::{check_compatibility, equidistant_form, make_equidistant, validate};
use hurwitz::{DifferentialForm, Field, FieldElement, HurwitzTree, Point, Polynomial, RationalFunction, ReductionType, TreeBuilder};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        let mut detail = summary;
        for f in failures.iter().take(5) {
            write!(detail, "\n      - {f}").unwrap();
        }
        if failures.len() > 5 {
            write!(detail, "\n      ... {} more", failures.len() - 5).unwrap();
        }
        Outcome { passed: failures.is_empty(), detail }
    }
}

fn field(spec: &str) -> Field {
    parse_field(spec).unwrap()
}

fn f2k(d: usize) -> Field {
    field(["2", "2:1,1,1", "2:1,1,0,1", "2:1,1,0,0,1"][d - 1])
}

fn f3k(d: usize) -> Field {
    field(["3", "3:1,0,1", "3:1,2,0,1", "3:2,0,0,2,1"][d - 1])
}

fn f5k(d: usize) -> Field {
    field(["5", "5:3,0,1"][d - 1])
}

fn w(f: &Field, s: &str) -> DifferentialForm {
    parse_form(f, s).unwrap()
}

// 1. Golden Cartier images.
fn golden_cartier() -> Outcome {
    let f2 = field("2");
    let f3 = field("3");
    let cases = [
        (&f2, "dx/(x^3 (x+1)^4)", "dx/(x^2 (x+1)^2)"),
        (&f2, "dx/(x^2 (x+1))", "dx/(x^2 (x+1)) + dx/x^2"),
        (&f2, "dx/(x^2 (x+1)^2)", "0"),
        (&f3, "dx/(x^13 (x-1)^9)", "dx/(x^5 (x-1)^3)"),
        (&f3, "dx/(x^2 (x^2-1))", "dx/(x^2 (x^2-1)) + dx/x^2"),
    ];
    let mut failures = Vec::new();
    for (f, input, expected) in cases {
        let (input, expected) = (w(f, input), w(f, expected));
        for (name, got) in [("partial fractions", input.cartier().unwrap()), ("expansion", input.cartier_by_expansion())] {
            if got != expected {
                failures.push(format!("{name}: C({}) = {}, expected {}", input.render(), got.render(), expected.render()));
            }
        }
    }
    Outcome::new(&failures, format!("{} images, two oracles each", cases.len()))
}

// 2. Golden breaks and conductors.
fn golden_breaks() -> Outcome {
    let rt = |f: &Field, entries: &[&[(usize, i64)]]| {
        let entries: Vec<Vec<FieldElement>> = entries
            .iter()
            .map(|terms| {
                let len = terms.iter().map(|&(j, _)| j + 1).max().unwrap_or(0);
                let mut v = vec![f.zero(); len];
                for &(j, c) in terms.iter() {
                    v[j] = f.from_int(c);
                }
                v
            })
            .collect();
        ReductionType::from_coefficients(f, &entries).unwrap()
    };
    let (f2, f3) = (field("2"), field("3"));
    let cases = [
        (rt(&f3, &[&[(7, 1)], &[(19, 1), (1, 1)]]), [7, 21], [8, 22], 0),
        (rt(&f3, &[&[(7, 1)], &[(26, 2), (5, 1)]]), [7, 26], [8, 27], 5),
        (rt(&f2, &[&[(3, 1)], &[(5, 1)]]), [3, 6], [4, 7], 0),
    ];
    let mut failures = Vec::new();
    for (rt, breaks, conductors, excess) in &cases {
        let got_b = rt.breaks().unwrap();
        let got_c = rt.conductors().unwrap();
        let got: Vec<u64> = got_c.iter().map(|c| c.conductor).collect();
        if got_b != breaks || got != conductors || got_c[1].excess != *excess || got_c[1].is_minimal() != (*excess == 0) {
            failures.push(format!("{}: breaks {got_b:?}, conductors {got:?}, excess {}", rt.render(), got_c[1].excess));
        }
    }
    Outcome::new(&failures, format!("{} reduction types", cases.len()))
}

// 3. Level-pair classification on reference rows and corrupted variants.
struct Row {
    name: &'static str,
    p: u32,
    lo: (Rational, &'static str),
    hi: (Rational, &'static str),
    expected: CaseTag,
}

fn classify(row: &Row) -> CaseTag {
    let f = field(&row.p.to_string());
    let (wl, wh) = (w(&f, row.lo.1), w(&f, row.hi.1));
    classify_level_pair(row.p, &row.lo.0, Some(&wl), &row.hi.0, &wh).unwrap().tag()
}

/// Rows whose printed data fail their own case identity; see the decisions ledger.
const KNOWN_BAD_ROWS: [&str; 2] = ["p3 tree v3,1", "p3 tree v2,1"];

fn reference_rows() -> Outcome {
    let row = |name, p, lo: (Rational, &'static str), hi: (Rational, &'static str), expected| Row { name, p, lo, hi, expected };
    let rows = [
        row("p2 tree v1", 2, (ratio(1, 2), "dx/(x^2 (x+1)^2)"), (int(1), "dx/(x^3 (x+1)^4)"), CaseTag::Case3a),
        row("p2 tree v2", 2, (int(1), "dx/x^2"), (int(2), "dx/(x^2 (x+1))"), CaseTag::Case3d),
        row("p2 tree v3", 2, (ratio(3, 4), "dx/x^2"), (ratio(7, 4), "dx/(x^2 (x+1)^2)"), CaseTag::Case3b),
        row("p3 tree v3", 3, (ratio(3, 2), "dx/x^3"), (ratio(5, 2), "-dx/x^3"), CaseTag::Case2),
        row("p3 tree v3,1", 3, (ratio(1, 2), "dx/x^3"), (ratio(3, 2), "dx/(x^3 (x^3-x^2+1))"), CaseTag::Case3d),
        row("p3 tree v2,1", 3, (ratio(1, 2), "-dx/x^3"), (ratio(3, 2), "-dx/(x^3 (x^3-x^2+1))"), CaseTag::Case3d),
        row("p3 tree v2,3", 3, (ratio(1, 2), "dx/x^2"), (ratio(3, 2), "dx/(x^2 (x^2-1))"), CaseTag::Case3d),
    ];
    let corrupted = [
        row("p2 tree v1, hi depth 3/2", 2, (ratio(1, 2), "dx/(x^2 (x+1)^2)"), (ratio(3, 2), "dx/(x^3 (x+1)^4)"), CaseTag::Fail),
        row("p2 tree v1, lo form dx/x^2", 2, (ratio(1, 2), "dx/x^2"), (int(1), "dx/(x^3 (x+1)^4)"), CaseTag::Fail),
        row("p2 tree v2, hi depth 3", 2, (int(1), "dx/x^2"), (int(3), "dx/(x^2 (x+1))"), CaseTag::Fail),
        row("p2 tree v3, hi form dx/(x^2 (x+1))", 2, (ratio(3, 4), "dx/x^2"), (ratio(7, 4), "dx/(x^2 (x+1))"), CaseTag::Fail),
        row("p2 tree v3, hi depth 1", 2, (ratio(3, 4), "dx/x^2"), (int(1), "dx/(x^2 (x+1)^2)"), CaseTag::Fail),
        row("p3 tree v3, sign kept", 3, (ratio(3, 2), "dx/x^3"), (ratio(5, 2), "dx/x^3"), CaseTag::Fail),
        row("p3 tree v3, hi depth 2", 3, (ratio(3, 2), "dx/x^3"), (int(2), "-dx/x^3"), CaseTag::Fail),
        row("p3 tree v2,3, hi form doubled", 3, (ratio(1, 2), "dx/x^2"), (ratio(3, 2), "2dx/(x^2 (x^2-1))"), CaseTag::Fail),
        row("p3 tree v2,3, lo form dx/x^3", 3, (ratio(1, 2), "dx/x^3"), (ratio(3, 2), "dx/(x^2 (x^2-1))"), CaseTag::Fail),
        row("p3 tree v2,3, hi depth 1", 3, (ratio(1, 2), "dx/x^2"), (int(1), "dx/(x^2 (x^2-1))"), CaseTag::Fail),
    ];
    let mut failures = Vec::new();
    for r in rows.iter().chain(&corrupted) {
        let got = classify(r);
        if got != r.expected {
            failures.push(format!("{}: got {got}, expected {}", r.name, r.expected));
        }
    }
    let unexpected: Vec<&String> = failures.iter().filter(|f| !KNOWN_BAD_ROWS.iter().any(|k| f.starts_with(&format!("{k}:")))).collect();
    assert!(unexpected.is_empty(), "classification regressed: {unexpected:?}");
    Outcome::new(&failures, format!("{} reference rows, {} corrupted variants", rows.len(), corrupted.len()))
}

// 4. Equidistant forms are logarithmic with l + 1 simple poles.
fn equidistant_suite() -> Outcome {
    let start = Instant::now();
    let fields: Vec<Field> = (1..=4).map(f2k).chain((1..=2).map(f3k)).chain((1..=2).map(f5k)).collect();
    let mut failures = Vec::new();
    let mut checked = 0;
    for f in &fields {
        let p = f.characteristic() as u64;
        for l in (1..=6).filter(|l| l % p != 0) {
            for a in f.nonzero_elements() {
                if f.lth_roots(a, l).len() as u64 != l {
                    continue;
                }
                checked += 1;
                let form = equidistant_form(f, l, a);
                let shape = form.pole_shape();
                let simple = shape.as_ref().is_some_and(|s| s.poles.len() as u64 == l + 1 && s.poles.iter().all(|&(_, m)| m == 1));
                if !form.is_logarithmic().unwrap() || !simple {
                    failures.push(format!("F_{} l={l} a={}", f.size(), f.render(a)));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}"));
    }
    Outcome::new(&failures, format!("{checked} split (q, l, a) triples in {elapsed:.2?}"))
}

// 5. Cartier property suite on seeded random forms.
fn random_function(f: &Field, rng: &mut ChaCha8Rng) -> RationalFunction {
    let q = f.size();
    let num: Vec<FieldElement> = (0..rng.gen_range(0..6)).map(|_| f.from_code(rng.gen_range(0..q)).unwrap()).collect();
    let mut den = Polynomial::one(f);
    for _ in 0..rng.gen_range(0..4) {
        let a = f.from_code(rng.gen_range(0..q)).unwrap();
        den = den.mul(&Polynomial::linear(f, a).pow(rng.gen_range(1..6)));
    }
    RationalFunction::new(Polynomial::new(f, num), den).unwrap()
}

fn cartier_properties() -> Outcome {
    const PER_PRIME: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    for f in [f2k(1), f2k(2), f3k(1), f3k(2), f5k(1), f5k(2)] {
        let p = f.characteristic();
        for _ in 0..PER_PRIME / 2 {
            let a = DifferentialForm::new(random_function(&f, &mut rng));
            let b = DifferentialForm::new(random_function(&f, &mut rng));
            let h = random_function(&f, &mut rng);
            let g = random_function(&f, &mut rng);
            let c = |x: &DifferentialForm| x.cartier().unwrap();
            let mut fail = |what: &str, x: &DifferentialForm| failures.push(format!("F_{}: {what} for {}", f.size(), x.render()));
            if c(&a.add(&b)) != c(&a).add(&c(&b)) {
                fail("additivity", &a);
            }
            if c(&a.mul_function(&h.powi(p as i64).unwrap())) != c(&a).mul_function(&h) {
                fail("p-inverse linearity", &a);
            }
            if !c(&DifferentialForm::exact(&g)).is_zero() {
                fail("exact form not killed", &DifferentialForm::exact(&g));
            }
            if !g.is_zero() {
                let dlog = DifferentialForm::dlog(&g).unwrap();
                if dlog.cartier_by_expansion() != dlog {
                    fail("dlog not fixed", &dlog);
                }
            }
            if c(&a) != a.cartier_by_expansion() {
                fail("oracles disagree", &a);
            }
        }
    }
    Outcome::new(&failures, format!("{PER_PRIME} random forms per prime, 5 identities each"))
}

// 6. Solver soundness and existence for a single previous pole.
/// Image of `a` under an embedding `small -> big`, or `None` if `big` does not contain `small`.
fn embed(small: &Field, big: &Field, a: FieldElement) -> Option<FieldElement> {
    let modulus = &small.spec().modulus;
    let gen = if small.degree() == 1 {
        big.one()
    } else {
        big.elements().find(|&y| {
            let mut acc = big.zero();
            for (i, &c) in modulus.iter().enumerate() {
                acc = big.add(acc, big.mul(big.from_int(c as i64), big.pow(y, i as u64)));
            }
            acc.is_zero()
        })?
    };
    if small.degree() == 1 {
        return Some(big.from_int(small.coeffs(a)[0] as i64));
    }
    let mut acc = big.zero();
    for (i, c) in small.coeffs(a).into_iter().enumerate() {
        acc = big.add(acc, big.mul(big.from_int(c as i64), big.pow(gen, i as u64)));
    }
    Some(acc)
}

fn independently_verified(prev: &DifferentialForm, sol: &DifferentialForm, m_n: u64) -> Result<(), String> {
    verify_cartier_solution(prev, sol, m_n, CartierVariant::FixedPlus)?;
    if !sol.coefficient().numerator().is_constant() {
        return Err("C1".into());
    }
    if sol.ord(Point::Infinity).unwrap() != m_n as i64 - 1 {
        return Err("C2".into());
    }
    if sol.cartier_by_expansion() != sol.add(prev) {
        return Err("C3".into());
    }
    Ok(())
}

fn solver_existence() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (mut instances, mut retried) = (0, 0);
    for (p, ladder) in [(2u32, (1..=4).map(f2k).collect::<Vec<_>>()), (3, (1..=4).map(f3k).collect())] {
        for (k, f) in ladder.iter().enumerate() {
            if f.size() > 9 {
                continue;
            }
            for m in 1..=4u64 {
                let m_n = p as u64 * m - p as u64 + 1;
                for c in f.nonzero_elements() {
                    instances += 1;
                    let prev = DifferentialForm::from_poles(f, c, &[(f.zero(), m + 1)]);
                    let mut found = solve_cartier(&prev, m_n, CartierVariant::FixedPlus).unwrap().map(|s| (prev.clone(), s));
                    if found.is_none() {
                        retried += 1;
                        for big in ladder.iter().skip(k + 1).filter(|b| b.degree() % f.degree() == 0) {
                            let prev = DifferentialForm::from_poles(big, embed(f, big, c).unwrap(), &[(big.zero(), m + 1)]);
                            if let Some(s) = solve_cartier(&prev, m_n, CartierVariant::FixedPlus).unwrap() {
                                found = Some((prev, s));
                                break;
                            }
                        }
                    }
                    match found {
                        None => failures.push(format!("p={p} F_{} m={m} c={}: no solution up to degree 4", f.size(), f.render(c))),
                        Some((prev, s)) => {
                            if let Err(e) = independently_verified(&prev, &s, m_n) {
                                failures.push(format!("unsound solution {} for {}: {e}", s.render(), prev.render()));
                            }
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("took {elapsed:?}"));
    }
    // For p = 2 and m = 3 the polar part forces two new poles with equal
    // position, so no field works; those instances are the only misses.
    let unexpected: Vec<&String> =
        failures.iter().filter(|f| !(f.starts_with("p=2 ") && f.contains(" m=3 ") && f.ends_with("no solution up to degree 4"))).collect();
    assert!(unexpected.is_empty(), "solver regressed: {unexpected:?}");
    Outcome::new(&failures, format!("{instances} instances ({retried} needed a larger field) in {elapsed:.2?}"))
}

// 7. Constructor end to end on a generated corpus.
fn form(f: &Field, c: i64, poles: &[(i64, u64)]) -> DifferentialForm {
    let poles: Vec<_> = poles.iter().map(|&(a, m)| (f.from_int(a), m)).collect();
    DifferentialForm::from_poles(f, f.from_int(c), &poles)
}

/// `1/x^k` as the first level, optionally followed by `1/x^j`.
fn monomial_rt(f: &Field, k: usize, next: Option<usize>) -> ReductionType {
    let entry = |k: usize| {
        let mut v = vec![f.zero(); k + 1];
        v[k] = f.one();
        v
    };
    let mut entries = vec![entry(k)];
    if let Some(j) = next {
        entries.push(if j == 0 { vec![] } else { entry(j) });
    }
    ReductionType::from_coefficients(f, &entries).unwrap()
}

fn small_z2(f: &Field) -> HurwitzTree {
    TreeBuilder::etale(f, "v0", monomial_rt(f, 1, None))
        .child("v0", f.zero(), "v1", int(2), 1, int(2), form(f, 1, &[(0, 1), (1, 1)]), 1)
        .leaf("v1", f.zero(), "b1", 1, 1)
        .leaf("v1", f.one(), "b2", 1, 1)
        .build()
        .unwrap()
}

fn cubic_z2(f: &Field) -> HurwitzTree {
    let mut pts = vec![f.zero()];
    pts.extend(f.lth_roots(f.one(), 3));
    pts.sort();
    let poles: Vec<_> = pts.iter().map(|&a| (a, 1)).collect();
    let omega = DifferentialForm::from_poles(f, f.one(), &poles);
    let mut b = TreeBuilder::etale(f, "v0", monomial_rt(f, 3, None)).child("v0", f.zero(), "v1", ratio(2, 3), 3, int(2), omega, 1);
    for (i, a) in pts.into_iter().enumerate() {
        b = b.leaf("v1", a, &format!("b{i}"), 1, 1);
    }
    b.build().unwrap()
}

fn three_branch(f: &Field, depth: Rational) -> HurwitzTree {
    let top = ratio(3, 2);
    let mut b = TreeBuilder::etale(f, "v0", monomial_rt(f, 5, None)).child(
        "v0",
        f.zero(),
        "t",
        &depth / int(5),
        5,
        depth.clone(),
        form(f, 1, &[(0, 2), (1, 2), (2, 2)]),
        1,
    );
    for i in 0..3 {
        let id = format!("u{i}");
        b = b
            .child("t", f.from_int(i), &id, &top - &depth, 1, top.clone(), form(f, 1, &[(0, 1), (1, 1)]), 1)
            .leaf(&id, f.zero(), &format!("{id}a"), 1, 1)
            .leaf(&id, f.one(), &format!("{id}b"), 1, 1);
    }
    b.build().unwrap()
}

enum Goal {
    Minimal,
    General(u64),
}

struct Case {
    name: String,
    fields: Vec<Field>,
    tree: Box<dyn Fn(&Field) -> HurwitzTree>,
    goal: Goal,
}

fn target(t: &HurwitzTree, goal: &Goal) -> ExtensionTarget {
    let f = t.field();
    let p = f.characteristic() as usize;
    match (t.reduction_type(), goal) {
        (None, Goal::Minimal) => ExtensionTarget::minimal(),
        (None, Goal::General(l)) => ExtensionTarget::general(*l, None),
        (Some(rt), goal) => {
            let k = rt.breaks().unwrap()[0] as usize;
            let next = match goal {
                Goal::Minimal => 0,
                Goal::General(l) => p * k + *l as usize,
            };
            ExtensionTarget::etale(monomial_rt(f, k, Some(next))).unwrap()
        }
    }
}

fn corpus() -> Vec<Case> {
    let mut cases = Vec::new();
    let mut add =
        |name: String, fields: Vec<Field>, tree: Box<dyn Fn(&Field) -> HurwitzTree>, goal| cases.push(Case { name, fields, tree, goal });
    add("small Z/2, minimal".into(), vec![f2k(1), f2k(2)], Box::new(small_z2), Goal::Minimal);
    for l in [1, 3] {
        add(format!("small Z/2, general l={l}"), vec![f2k(2), f2k(4)], Box::new(small_z2), Goal::General(l));
    }
    add("cubic Z/2, minimal".into(), vec![f2k(2), f2k(4)], Box::new(cubic_z2), Goal::Minimal);
    for (num, den) in [(1, 4), (1, 3), (1, 5)] {
        add(
            format!("three branches at {num}/{den}, minimal"),
            vec![f3k(2), f3k(4)],
            Box::new(move |f| three_branch(f, ratio(num, den))),
            Goal::Minimal,
        );
    }
    add("three branches at 1/4, general l=5".into(), vec![f3k(4)], Box::new(|f| three_branch(f, ratio(1, 4))), Goal::General(5));
    let equidistant = [
        (2u32, 1u64, vec![f2k(1), f2k(2)], vec![(1, 2), (1, 4), (3, 4)]),
        (2, 3, vec![f2k(2), f2k(4)], vec![(1, 2), (3, 4)]),
        (2, 5, vec![f2k(4)], vec![(1, 2)]),
        (3, 1, vec![f3k(1), f3k(2)], vec![(1, 4), (1, 3)]),
        (3, 2, vec![f3k(1), f3k(2)], vec![(1, 4), (1, 8)]),
        (3, 4, vec![f3k(2), f3k(4)], vec![(1, 4), (1, 8)]),
    ];
    for (p, l, fields, depths) in equidistant {
        for (num, den) in depths {
            let tree = move |f: &Field| make_equidistant(f, l, f.one(), &ratio(num, den), &int(0)).unwrap();
            add(format!("equidistant p={p} l={l} at {num}/{den}, minimal"), fields.clone(), Box::new(tree), Goal::Minimal);
        }
    }
    for (l, goal_l) in [(1, 1), (2, 1), (1, 2)] {
        let tree = move |f: &Field| make_equidistant(f, l, f.one(), &ratio(1, 4), &int(0)).unwrap();
        add(format!("equidistant p=3 l={l} at 1/4, general l={goal_l}"), vec![f3k(2), f3k(4)], Box::new(tree), Goal::General(goal_l));
    }
    add(
        "equidistant p=2 l=1 at 1/2, general l=1".into(),
        vec![f2k(2), f2k(4)],
        Box::new(|f| make_equidistant(f, 1, f.one(), &ratio(1, 2), &int(0)).unwrap()),
        Goal::General(1),
    );
    cases
}

fn extend_case(case: &Case) -> Result<String, String> {
    let mut last = String::new();
    for f in &case.fields {
        let prev = (case.tree)(f);
        let mut r = validate(&prev);
        r.extend(check_compatibility(&prev));
        if !r.is_valid() {
            return Err(format!("input invalid over F_{}: {r}", f.size()));
        }
        let p = f.characteristic() as u64;
        let cut = ratio(1, p as i64 - 1);
        if prev.vertices().iter().any(|v| v.depth == cut) || prev.conductor() > 6 || p > 3 {
            return Err("input outside the corpus bounds".into());
        }
        let target = target(&prev, &case.goal);
        let ext = match extend_tree(&prev, &target) {
            Ok(ext) => ext,
            Err(e) => {
                last = format!("F_{}: {e}", f.size());
                continue;
            }
        };
        let mut r = validate(&ext.tree);
        r.extend(check_compatibility(&ext.tree));
        r.extend(check_extension(&prev, &ext.tree, &ext.map));
        if !r.is_valid() {
            return Err(format!("F_{}: {r}", f.size()));
        }
        let excess = match case.goal {
            Goal::Minimal => 0,
            Goal::General(l) => l,
        };
        let expected = p * prev.conductor() - p + 1 + excess;
        if ext.tree.conductor() != expected {
            return Err(format!("conductor {} instead of {expected}", ext.tree.conductor()));
        }
        if ext.tree.root().depth != int(p as i64) * &prev.root().depth {
            return Err("root depth is not p times the input's".into());
        }
        return Ok(format!("F_{}", f.size()));
    }
    Err(last)
}

fn constructor_corpus() -> Outcome {
    let start = Instant::now();
    let cases = corpus();
    let mut failures = Vec::new();
    for case in &cases {
        if let Err(e) = extend_case(case) {
            failures.push(format!("{}: {e}", case.name));
        }
    }
    let elapsed = start.elapsed();
    if cases.len() < 20 {
        failures.push(format!("corpus has only {} trees", cases.len()));
    }
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("took {elapsed:?}"));
    }
    Outcome::new(&failures, format!("{} trees in {elapsed:.2?}", cases.len()))
}

// 8. Trunk partition.
fn trunk_partition() -> Outcome {
    let mut failures = Vec::new();
    let golden = partition_trunk(6, 3, 5, 2, &int(1)).unwrap();
    if golden != (ratio(1, 6), ratio(5, 6)) {
        failures.push(format!("(3, 6, 5, 1) gave {golden:?}"));
    }
    let mut swept = 0;
    'sweep: for p in [2u32, 3, 5] {
        for c in [2u64, 3, 4, 6, 9] {
            for lp in 1..p as u64 {
                for m in 0..3 {
                    for eps0 in [ratio(1, 7), int(1), ratio(5, 2)] {
                        if swept == 100 {
                            break 'sweep;
                        }
                        swept += 1;
                        let (e1, e2) = partition_trunk(c, p, p as u64 * m + lp, lp, &eps0).unwrap();
                        if e1 <= int(0) || e2 <= int(0) || &e1 + &e2 != eps0 {
                            failures.push(format!("p={p} C={c} l'={lp} m={m} eps0={eps0}: ({e1}, {e2})"));
                        }
                    }
                }
            }
        }
    }
    if swept < 100 {
        failures.push(format!("only {swept} sweep points"));
    }
    Outcome::new(&failures, format!("golden value and {swept} sweep points"))
}

// 9. Serialization round trip and determinism on the shipped data.
fn data_round_trip() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut failures = Vec::new();
    let mut names: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    for path in &names {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let text = std::fs::read_to_string(path).unwrap();
        let again = if name.ends_with(".witt.json") {
            schema::witt_to_json(&schema::witt_from_json(&text).unwrap())
        } else if name.ends_with(".map.json") {
            schema::map_to_json(&schema::map_from_json(&text).unwrap())
        } else if name.ends_with(".target.json") {
            let doc: schema::TargetDoc = schema::from_json(&text).unwrap();
            schema::to_json(&doc)
        } else {
            let t = schema::tree_from_json(&text).unwrap();
            if hurwitz::dot::to_dot(&t) != hurwitz::dot::to_dot(&schema::tree_from_json(&text).unwrap()) {
                failures.push(format!("{name}: dot output differs between runs"));
            }
            schema::tree_to_json(&t)
        };
        if again != text {
            failures.push(format!("{name}: serialization is not idempotent"));
        }
    }
    let lo = schema::tree_from_json(&std::fs::read_to_string(dir.join("cubic_z2_f4.json")).unwrap()).unwrap();
    let doc: schema::TargetDoc = schema::from_json(&std::fs::read_to_string(dir.join("cubic_z2_f4.target.json")).unwrap()).unwrap();
    let runs: Vec<String> = (0..2)
        .map(|_| {
            let ext = extend_tree(&lo, &doc.build(&lo).unwrap()).unwrap();
            schema::tree_to_json(&ext.tree) + &schema::map_to_json(&ext.map)
        })
        .collect();
    let shipped = std::fs::read_to_string(dir.join("cubic_z4_f4.json")).unwrap()
        + &std::fs::read_to_string(dir.join("cubic_z4_f4.map.json")).unwrap();
    if runs[0] != runs[1] || runs[0] != shipped {
        failures.push("extending cubic_z2_f4 does not reproduce the shipped output".into());
    }
    Outcome::new(&failures, format!("{} files", names.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

// Runs without the test harness so the report is always printed.
fn main() {
    let criteria: [Criterion; 9] = [
        ("golden Cartier images", golden_cartier),
        ("golden breaks and conductors", golden_breaks),
        ("level-pair classification of reference rows", reference_rows),
        ("equidistant forms", equidistant_suite),
        ("Cartier operator properties", cartier_properties),
        ("solver soundness and existence", solver_existence),
        ("constructor end to end", constructor_corpus),
        ("trunk partition", trunk_partition),
        ("round trip and determinism", data_round_trip),
    ];
    println!("\nrunning acceptance criteria");
    let mut red = Vec::new();
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let o = run();
        println!("[{}] {} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.passed {
            red.push(i + 1);
        }
    }
    // Criteria 3 and 6 stay red on known cases; each asserts that nothing
    // else regressed.
    assert!(red.iter().all(|&i| i == 3 || i == 6), "failing criteria: {red:?}");
}
