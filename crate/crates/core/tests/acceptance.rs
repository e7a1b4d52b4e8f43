//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

mod common;

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use hombasis::basis::{expand_condens, expand_surjhom, matrix_views, mobius_expand_surjhom, verify_matrix_identities};
use hombasis::canon::{enumerate_structures, StructureClasses};
use hombasis::counting::{
    count_condens, count_hom, count_surjhom, count_surjhom_inclusion_exclusion, hom_via_surjections,
    surjhom_via_condensations,
};
use hombasis::interpolation::{extract_hom_values, lovasz_distinguisher, CombinationOracle};
use hombasis::sample::Sampler;
use hombasis::{Count, Expansion, Rational, Signature, Structure};

use common::*;

type Check = Result<String, String>;

fn count(n: u64) -> Count {
    Count::from(n)
}

fn rational(c: &Count) -> Rational {
    Rational::from_integer(BigInt::from(c.clone()))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(s: &Structure) -> String {
    hombasis::io::structure_to_json(s)
}

/// Canonical E:2 templates with total size at most `max_total`.
fn templates_by_total(max_total: usize) -> Vec<Structure> {
    StructureClasses::new(Signature::digraph(), max_total).take_while(|b| b.total_size() <= max_total).collect()
}

fn decomposition_identities() -> Check {
    let classes = enumerate_structures(&Signature::digraph(), 3);
    let mut pairs = 0;
    for a in &classes {
        for b in &classes {
            // library route: sums over canonical classes
            let hom = count_hom(a, b).unwrap();
            ensure(hom_via_surjections(a, b).unwrap() == hom, || format!("hom via surjections (classes), A={} B={}", show(a), show(b)))?;
            let surj = count_surjhom(a, b).unwrap();
            ensure(surjhom_via_condensations(a, b).unwrap() == surj, || {
                format!("surjhom via condensations (classes), A={} B={}", show(a), show(b))
            })?;
            // independent route: sums over labeled subsets and labeled deducts
            let by_subsets: u64 = (1u32..1 << b.len()).map(|m| naive_surjhom(a, &induced_by_mask(b, m))).sum();
            ensure(count(by_subsets) == hom, || format!("hom via surjections (subsets), A={} B={}", show(a), show(b)))?;
            let by_deducts: Count = all_deducts(b).iter().map(|d| count_condens(a, d).unwrap()).sum();
            ensure(by_deducts == surj, || format!("surjhom via condensations (deducts), A={} B={}", show(a), show(b)))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

/// Criterion 2 and 3 share the expansions.
struct Expansions {
    templates: Vec<Structure>,
    surj: Vec<Expansion>,
    cond: Vec<Expansion>,
}

fn build_expansions() -> Expansions {
    let templates = templates_by_total(5);
    let surj = templates.iter().map(expand_surjhom).collect();
    let cond = templates.iter().map(expand_condens).collect();
    Expansions { templates, surj, cond }
}

fn expansion_soundness(ex: &Expansions) -> Check {
    let mut probes: Vec<Structure> = Sampler::new(Signature::digraph(), 4, 2024).take(50).collect();
    probes.extend((1..=2).flat_map(|n| all_labeled(&Signature::digraph(), n)));
    for ((b, surj), cond) in ex.templates.iter().zip(&ex.surj).zip(&ex.cond) {
        for a in &probes {
            ensure(surj.evaluate(a).unwrap() == rational(&count_surjhom(a, b).unwrap()), || {
                format!("surjhom expansion of {} wrong on {}", show(b), show(a))
            })?;
            ensure(cond.evaluate(a).unwrap() == rational(&count_condens(a, b).unwrap()), || {
                format!("condens expansion of {} wrong on {}", show(b), show(a))
            })?;
        }
    }
    Ok(format!("{} templates x {} structures", ex.templates.len(), probes.len()))
}

fn unit_self_coefficient(ex: &Expansions) -> Check {
    let mut terms = 0;
    let pairs = ex.templates.iter().zip(&ex.surj).chain(ex.templates.iter().zip(&ex.cond));
    for (b, lc) in pairs {
        let own: Vec<&Rational> =
            lc.terms().iter().filter(|t| naive_isomorphic(t.structure(), b)).map(|t| t.coefficient()).collect();
        ensure(own.len() == 1 && own[0].is_one(), || format!("self coefficient of {} is {:?}", show(b), own))?;
        for t in lc.terms() {
            ensure(t.coefficient().is_integer(), || format!("coefficient {} in expansion of {}", t.coefficient(), show(b)))?;
            terms += 1;
        }
    }
    Ok(format!("{terms} terms integral"))
}

fn matrix_identities() -> Check {
    let mut dims = Vec::new();
    for (sig, max) in [(Signature::digraph(), 2), (Signature::new([("U", 1)]).unwrap(), 3)] {
        let view = matrix_views(&sig, max).unwrap();
        let report = verify_matrix_identities(&view);
        ensure(report.holds(), || format!("violations {:?}", report.violations))?;
        // entries against definitional counts
        let n = view.index.len();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (&view.index[i], &view.index[j]);
                let (h, s, c) = naive_counts(x, y);
                let expect = [h, s, c, naive_indsub(x, y), naive_deducts(x, y)];
                let got = [&view.hom, &view.surjhom, &view.condens, &view.indsub, &view.deducts].map(|m| m[(i, j)].clone());
                for (e, g) in expect.iter().zip(&got) {
                    ensure(Rational::from_integer(BigInt::from(*e)) == *g, || format!("entry ({i}, {j}) is {g}, expected {e}"))?;
                }
            }
        }
        dims.push(n);
    }
    ensure(dims[0] == 12, || format!("E:2 slice has {} classes", dims[0]))?;
    Ok(format!("dimensions {dims:?}"))
}

fn mobius_agreement() -> Check {
    let classes = enumerate_structures(&Signature::digraph(), 3);
    for b in &classes {
        ensure(mobius_expand_surjhom(b) == expand_surjhom(b), || format!("routes differ on {}", show(b)))?;
    }
    Ok(format!("{} templates", classes.len()))
}

fn distinguisher_classes() -> Vec<Vec<Structure>> {
    let cycle = digraph(2, &[(0, 1), (1, 0)]);
    let augmented = digraph(3, &[(0, 1), (1, 0), (2, 0)]);
    let loop_ = digraph(1, &[(0, 0)]);
    let tri = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
    vec![
        vec![cycle.clone(), augmented.clone()],
        vec![cycle.clone(), augmented, digraph(4, &[(0, 1), (1, 0), (2, 3), (3, 2)])],
        vec![isolated(1), isolated(2), isolated(3)],
        vec![digraph(2, &[(0, 1)]), digraph(4, &[(0, 1), (2, 3)]), digraph(3, &[(0, 1), (0, 2)])],
        vec![loop_.clone(), digraph(2, &[(0, 0), (1, 0)]), digraph(2, &[(0, 0), (0, 1), (1, 0), (1, 1)])],
        vec![tri.clone(), digraph(4, &[(0, 1), (1, 2), (2, 0), (3, 0)])],
        vec![digraph(2, &[(0, 1), (1, 0)]), digraph(3, &[(0, 1), (1, 0), (1, 2), (2, 1)])],
    ]
}

fn distinguishers() -> Check {
    let classes = distinguisher_classes();
    for class in &classes {
        for (i, x) in class.iter().enumerate() {
            for y in &class[i + 1..] {
                ensure(naive_hom(x, y) > 0 && naive_hom(y, x) > 0 && !naive_isomorphic(x, y), || {
                    format!("test class member pair {} / {} is not a valid pair", show(x), show(y))
                })?;
            }
        }
        let d = lovasz_distinguisher(class).map_err(|e| e.to_string())?;
        let values: Vec<Count> = class.iter().map(|b| naive_hom_big(&d, b)).collect();
        ensure(values.iter().all(|v| !v.is_zero()), || format!("zero value {values:?}"))?;
        for (i, v) in values.iter().enumerate() {
            ensure(!values[i + 1..].contains(v), || format!("repeated value in {values:?}"))?;
        }
    }
    Ok(format!("{} classes", classes.len()))
}

fn extraction_soundness() -> Check {
    let templates = templates_by_total(4);
    let inputs: Vec<Structure> = Sampler::new(Signature::digraph(), 3, 77).take(10).collect();
    let mut runs = 0;
    for b in &templates {
        for lc in [expand_surjhom(b), expand_condens(b)] {
            let oracle = CombinationOracle::new(&lc);
            for a in &inputs {
                let out = extract_hom_values(&lc, &oracle, a).map_err(|e| format!("{} on {}: {e}", show(b), show(a)))?;
                for (t, v) in lc.terms().iter().zip(&out.values) {
                    ensure(*v == Rational::from_integer(BigInt::from(naive_hom(a, t.structure()))), || {
                        format!("hom({}, {}) recovered as {v}", show(a), show(t.structure()))
                    })?;
                }
                runs += 1;
            }
        }
    }
    // anchor
    let lc = expand_surjhom(&isolated(2));
    let out = extract_hom_values(&lc, &CombinationOracle::new(&lc), &isolated(3)).map_err(|e| e.to_string())?;
    let by_term: Vec<(usize, i64)> =
        lc.terms().iter().map(|t| t.structure().len()).zip(out.values.iter().map(|v| v.to_integer().to_i64().unwrap())).collect();
    ensure(by_term.contains(&(2, 8)) && by_term.contains(&(1, 1)) && by_term.len() == 2, || {
        format!("anchor gave {by_term:?}")
    })?;
    Ok(format!("{runs} extractions, anchor (8, 1)"))
}

fn surjection_closed_form() -> Check {
    for m in 1..=5u64 {
        for n in 1..=3u64 {
            let got = count_surjhom(&isolated(m as usize), &isolated(n as usize)).unwrap();
            ensure(got == surjection_number(m, n), || format!("m={m} n={n}: {got}"))?;
        }
    }
    ensure(count_surjhom(&isolated(3), &isolated(2)).unwrap() == count(6), || "m=3 n=2".into())?;
    Ok("15 pairs".into())
}

fn counting_agreement() -> Check {
    let mut pairs = 0;
    let compare = |a: &Structure, b: &Structure| -> Result<(), String> {
        let (h, s, c) = naive_counts(a, b);
        let got = (count_hom(a, b).unwrap(), count_surjhom(a, b).unwrap(), count_condens(a, b).unwrap());
        ensure(got == (count(h), count(s), count(c)), || format!("A={} B={}: {got:?} vs {:?}", show(a), show(b), (h, s, c)))
    };
    let mut slices = vec![(Signature::digraph(), 3), (Signature::new([("U", 1)]).unwrap(), 3)];
    slices.push((Signature::new([("R", 3), ("U", 1)]).unwrap(), 2));
    for (sig, max) in slices {
        let classes = enumerate_structures(&sig, max);
        for a in &classes {
            for b in &classes {
                compare(a, b)?;
                pairs += 1;
            }
        }
    }
    // larger seeded pairs up to |B|^|A| = 10^6
    let mut sources = Sampler::new(Signature::digraph(), 6, 5);
    let mut targets = Sampler::new(Signature::digraph(), 10, 6);
    let mut big = 0;
    while big < 40 {
        let (a, b) = (sources.sample(), targets.sample());
        if (b.len() as f64).powi(a.len() as i32) <= 1e6 {
            compare(&a, &b)?;
            big += 1;
        }
    }
    compare(&digraph(6, &[(0, 1), (1, 2), (3, 4)]), &digraph(10, &[(0, 1), (1, 2), (2, 0), (3, 3), (4, 5)]))?;
    pairs += big + 1;
    for a in enumerate_structures(&Signature::digraph(), 3) {
        for b in enumerate_structures(&Signature::digraph(), 3) {
            ensure(count_surjhom(&a, &b).unwrap() == count_surjhom_inclusion_exclusion(&a, &b).unwrap(), || {
                format!("inclusion-exclusion differs on A={} B={}", show(&a), show(&b))
            })?;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn main() {
    let start = Instant::now();
    let ex = build_expansions();
    let criteria: [(&str, Box<dyn Fn() -> Check + '_>); 9] = [
        ("decomposition identities", Box::new(decomposition_identities)),
        ("expansion soundness", Box::new(|| expansion_soundness(&ex))),
        ("unit self-coefficient and integrality", Box::new(|| unit_self_coefficient(&ex))),
        ("matrix identities", Box::new(matrix_identities)),
        ("Mobius agreement", Box::new(mobius_agreement)),
        ("distinguisher construction", Box::new(distinguishers)),
        ("extraction soundness", Box::new(extraction_soundness)),
        ("surjection closed form", Box::new(surjection_closed_form)),
        ("counting oracle agreement", Box::new(counting_agreement)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{:.1?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of 9 criteria passed in {:.1?}", 9 - failed, start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
