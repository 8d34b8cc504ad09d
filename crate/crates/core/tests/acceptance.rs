//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashSet;
use std::time::Instant;

use num_integer::Integer;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use symsys_core::polygon::{a_k_indices, pair_placements};
use symsys_core::reductions::{certify_bound_traced, ReductionKind};
use symsys_core::search::{verify_cells, RowStatus};
use symsys_core::*;

const KS: [u64; 8] = [1, 2, 3, 4, 5, 7, 8, 12];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_systems() -> Vec<(String, IntSystem)> {
    let mut out = Vec::new();
    for &k in &KS {
        for g in 1..=25 {
            out.push((format!("construction_one(g={g}, k={k})"), construction_one(g, k).unwrap()));
        }
        for g in 3..=50 {
            out.push((format!("construction_two(g={g}, k={k})"), construction_two(g, k).unwrap()));
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let cells = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)];
    let table = verify_cells(&cells, SearchMode::Discover, SearchBudget::default()).map_err(|e| e.to_string())?;
    for row in &table.rows {
        // Independent expectation, written out per cell.
        let expected = match (row.mode.as_str(), row.genus, row.power) {
            ("general", g, _) => 2 * g + 1,
            ("primitive", g, 1) => 2 * g + 1,
            ("primitive", 3, _) => 7,
            ("primitive", g, _) => 2 * g,
            _ => unreachable!(),
        };
        ensure(row.exhaustive && row.status == RowStatus::Match, || {
            format!("({}, {}) {}: {:?}", row.genus, row.power, row.mode, row)
        })?;
        ensure(row.found == Some(expected), || {
            format!("({}, {}) {}: found {:?}, expected {expected}", row.genus, row.power, row.mode, row.found)
        })?;
    }
    Ok(format!("{} rows exhaustive and matching", table.rows.len()))
}

fn criterion_2() -> Outcome {
    let mut n = 0;
    for &k in &KS {
        for g in 1..=25 {
            let s = construction_one(g, k).map_err(|e| e.to_string())?;
            let v = s.check().map_err(|e| e.to_string())?;
            ensure(v.valid, || format!("g={g} k={k}: {:?}", v.violation))?;
            ensure(s.len() == 2 * g + (k % 2) as usize, || format!("g={g} k={k}: size {}", s.len()))?;
            ensure(s.all_primitive(), || format!("g={g} k={k}: non-primitive element"))?;
            n += 1;
        }
    }
    Ok(format!("{n} systems valid with size 2g + (k mod 2)"))
}

fn criterion_3() -> Outcome {
    let mut n = 0;
    for &k in &KS {
        let power = power_of_k(k).map_err(|e| e.to_string())?;
        for g in 3..=50 {
            let s = construction_two(g, k).map_err(|e| e.to_string())?;
            ensure(s.len() == 2 * g + 1, || format!("g={g} k={k}: size {}", s.len()))?;
            ensure(s.all_primitive(), || format!("g={g} k={k}: non-primitive element"))?;
            for (i, u) in s.elements().iter().enumerate() {
                for w in &s.elements()[i + 1..] {
                    let p = u.pairing(w).unwrap();
                    ensure(p.unsigned_abs() == k as u128, || format!("g={g} k={k}: pairing {p}"))?;
                }
            }
            let r = s.reduce_mod(power).map_err(|e| e.to_string())?;
            ensure(r.len() == s.len() && r.check().valid, || format!("g={g} k={k}: reduction invalid"))?;
            n += 1;
        }
    }
    Ok(format!("{n} systems of size 2g + 1, reductions valid"))
}

fn certify_one(name: &str, s: &IntSystem) -> Result<usize, String> {
    let power = power_of_k(s.k().unwrap()).unwrap();
    let r = s.reduce_mod(power).map_err(|e| e.to_string())?;
    let (c, traces) = certify_bound_traced(&r).map_err(|e| format!("{name}: {e}"))?;
    ensure(c.holds(), || format!("{name}: {c:?}"))?;
    let mut steps = 0;
    for t in traces.iter().filter(|t| t.kind == ReductionKind::Genus) {
        let (inp, out) = (t.input.elements(), t.output.elements());
        for (a, &(wi, wo)) in t.mapping.iter().enumerate() {
            for &(xi, xo) in &t.mapping[a + 1..] {
                let before = inp[wi].pairing(&inp[xi]).unwrap();
                let after = out[wo].pairing(&out[xo]).unwrap();
                ensure(before.value() == after.value(), || format!("{name}: pairing changed"))?;
            }
        }
        ensure(inp.len() <= out.len() + 2, || format!("{name}: lost more than two"))?;
        steps += 1;
    }
    Ok(steps)
}

fn criterion_4() -> Outcome {
    let systems = all_systems();
    let steps: usize = systems
        .par_iter()
        .map(|(name, s)| certify_one(name, s))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    Ok(format!("{} systems certified, {steps} genus steps rechecked", systems.len()))
}

fn parity_ok(name: &str, s: &IntSystem) -> Result<usize, String> {
    let r = dependence_parity_check(s).map_err(|e| e.to_string())?;
    ensure(r.system_valid, || format!("{name}: not a system"))?;
    for d in &r.dependencies {
        let nonzero = d.coefficients.iter().all(|c| !c.is_zero());
        let odd = d.coefficients.iter().all(|c| c.is_odd());
        ensure(nonzero && odd, || format!("{name}: dependence {:?}", d.coefficients))?;
    }
    ensure(r.violations == 0, || format!("{name}: {} violations", r.violations))?;
    Ok(r.dependencies.len())
}

fn criterion_5() -> Outcome {
    let systems = all_systems();
    let mut deps: usize = systems
        .par_iter()
        .map(|(name, s)| parity_ok(name, s))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for trial in 0..200 {
        let (name, s) = &systems[rng.gen_range(0..systems.len())];
        let size = rng.gen_range(1..=s.len());
        let mut idx = sample(&mut rng, s.len(), size).into_vec();
        idx.sort_unstable();
        let sub = s.subset(&idx).map_err(|e| e.to_string())?;
        deps += parity_ok(&format!("subset {trial} of {name}"), &sub)?;
    }
    Ok(format!("{} systems and 200 subsets, {deps} dependencies all odd", systems.len()))
}

fn criterion_6() -> Outcome {
    let mut pairs = 0;
    for g in 5..=16 {
        for k in 2..=g - 3 {
            let curves = generate_a_k(g, k);
            ensure(curves.len() == (k - 1) * (g - k - 1), || format!("g={g} k={k}: |A_k| = {}", curves.len()))?;
            let mut seen = HashSet::new();
            for (c, (i, j)) in curves.iter().zip(a_k_indices(g, k)) {
                ensure(is_simple(c), || format!("{c} not simple"))?;
                let sig = partition(c).map_err(|e| e.to_string())?;
                // Block of v_1 from the closed form [1, i-1] and [j, j+k-i].
                let expected: Vec<usize> = (1..i).chain(j..=j + k - i).collect();
                ensure(sig.block == expected, || format!("{c}: block {:?}", sig.block))?;
                ensure(seen.insert(sig.block), || format!("g={g} k={k}: repeated partition"))?;
            }
            for a in 0..curves.len() {
                for b in a + 1..curves.len() {
                    let (x, y) = (curves[a], curves[b]);
                    let m = minimal_crossings(&x, &y).map_err(|e| e.to_string())?;
                    ensure(m == 2, || format!("{x} vs {y}: minimal crossings {m}"))?;
                    for p in pair_placements(&x, &y).map_err(|e| e.to_string())? {
                        let s = signed_crossing_sum(&[x, y], 0, 1, &p).map_err(|e| e.to_string())?;
                        ensure(s == 0, || format!("{x} vs {y}: signed sum {s}"))?;
                    }
                    pairs += 1;
                }
            }
            if g % 2 == 0 && k == g / 2 {
                ensure(4 * curves.len() + 4 * g > g * g, || format!("g={g}: |A_k| too small"))?;
            }
        }
    }
    Ok(format!("{pairs} pairs cross exactly twice with signed sum 0"))
}

fn random_primitive(rng: &mut ChaCha8Rng, g: usize, power: Power) -> ResidueVector {
    loop {
        let c: Vec<i64> = (0..2 * g).map(|_| rng.gen_range(0..power.modulus() as i64)).collect();
        let v = ResidueVector::new(&c, power).unwrap();
        if v.is_primitive() {
            return v;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for trial in 0..1000 {
        let g = rng.gen_range(1..=3);
        let power = Power::new(rng.gen_range(1..=3)).unwrap();
        let u = random_primitive(&mut rng, g, power);
        let v = random_primitive(&mut rng, g, power);
        let nf = pair_normal_form(&u, &v).map_err(|e| e.to_string())?;
        let t = &nf.transform;
        ensure(t.is_symplectic(), || format!("trial {trial}: not symplectic"))?;
        let tu = t.apply(&u).unwrap();
        ensure(tu == ResidueVector::basis(g, 0, power), || format!("trial {trial}: Tu = {:?}", tu.coords()))?;
        let tv = t.apply(&v).unwrap();
        let b = u.pairing(&v).unwrap().value();
        for (i, &c) in tv.coords().iter().enumerate() {
            let allowed = i == 0 || i == g || i == 2 * g - 1;
            ensure(allowed || c == 0, || format!("trial {trial}: Tv = {:?}", tv.coords()))?;
        }
        ensure(tv.coords()[g] == b, || format!("trial {trial}: middle {} != {b}", tv.coords()[g]))?;
    }
    Ok("1000 certified pair normal forms".into())
}

fn criterion_8() -> Outcome {
    let quads = [((3, 4), [1, 3, 4, 10]), ((5, 7), [1, 5, 7, 11]), ((6, 9), [1, 6, 9, 12])];
    let mut curves = Vec::new();
    for ((i, j), q) in quads {
        let c = alpha_curve(12, 8, i, j).map_err(|e| e.to_string())?;
        ensure(c.quad() == q, || format!("alpha({i},{j}) = {c}"))?;
        curves.push(c);
    }
    let p = Placement::canonical(&curves).map_err(|e| e.to_string())?;
    for a in 0..3 {
        for b in a + 1..3 {
            let n = crossing_count(&curves, a, b, &p).map_err(|e| e.to_string())?;
            ensure(n == 2, || format!("{} vs {}: {n}", curves[a], curves[b]))?;
        }
    }
    Ok("alpha(3,4), alpha(5,7), alpha(6,9) match, pairwise crossings 2".into())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("extremal bounds by exhaustive search", criterion_1),
        ("first construction", criterion_2),
        ("second construction", criterion_3),
        ("reduction certificates", criterion_4),
        ("dependence parity", criterion_5),
        ("polygon family", criterion_6),
        ("normal-form certificates", criterion_7),
        ("g = 12, k = 8 spot checks", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({ms} ms)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} ({ms} ms)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
