//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use skewtab::asymptotics::{
    conjecture_envelope_check, family_records, find_family, fit_leading_term, FamilyRecord, Sign, DEFAULT_CELL_BUDGET,
};
use skewtab::characters::absolute_length_distribution;
use skewtab::estimates::{
    b_upper_fs_exact, calibrate_a_exact, count_omega, partial_sums_by_length, second_order_approx, BandScheme,
    DiagnosticSpec,
};
use skewtab::exact_count::{
    a_ratio_from_count, f_lambda, f_skew_chain_dp, f_skew_charsum, f_skew_determinant, factorial,
    level_set_distribution, skew_counts_from_outer,
};
use skewtab::kimoh::{kimoh_count, kimoh_shape, KimOhParams};
use skewtab::{Partition, SkewShape};

type Verdict = (bool, String);

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Verdict,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(v: &BigUint) -> BigRational {
    BigRational::from(BigInt::from(v.clone()))
}

fn all_pairs(max_n: usize) -> Vec<(Partition, Partition)> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for lam in Partition::all(n) {
            for k in 0..=n {
                for mu in lam.sub_partitions(k) {
                    out.push((lam.clone(), mu));
                }
            }
        }
    }
    out
}

fn skew_count_agreement() -> Verdict {
    let pairs = all_pairs(8);
    for (lam, mu) in &pairs {
        let shape = SkewShape::new(lam.clone(), mu.clone()).unwrap();
        let dp = f_skew_chain_dp(&shape);
        let det = f_skew_determinant(&shape).unwrap();
        let cs = f_skew_charsum(lam, mu).unwrap();
        if dp != det || dp != cs {
            return (false, format!("{shape}: chain {dp}, determinant {det}, class sum {cs}"));
        }
    }
    (true, format!("{} skew shapes, three methods identical", pairs.len()))
}

fn level_sets() -> Verdict {
    let mut cases = 0;
    for n in 0..=10 {
        for lam in Partition::all(n) {
            let f = f_lambda(&lam);
            for k in 0..=n {
                let counts = skew_counts_from_outer(&lam, k).unwrap();
                let sum: BigUint = counts.iter().map(|(mu, s)| f_lambda(mu) * s).sum();
                if sum != f {
                    return (false, format!("Σ f^μ f^(λ/μ) = {sum} ≠ {f} at ({lam}), k = {k}"));
                }
                let total = level_set_distribution(&lam, k).unwrap().into_values().fold(BigRational::zero(), |a, b| a + b);
                if !total.is_one() {
                    return (false, format!("level-set law sums to {total} at ({lam}), k = {k}"));
                }
                cases += 1;
            }
        }
    }
    (true, format!("{cases} (λ, k) pairs exact"))
}

fn stirling_first_kind(max_k: usize) -> Vec<Vec<BigUint>> {
    // c[k][j]: permutations of k elements with j cycles
    let mut c = vec![vec![BigUint::one()]];
    for k in 1..=max_k {
        let prev = &c[k - 1];
        let mut row = vec![BigUint::zero(); k + 1];
        for j in 1..=k {
            let stay = prev.get(j).cloned().unwrap_or_default() * (k - 1);
            row[j] = stay + &prev[j - 1];
        }
        c.push(row);
    }
    c
}

fn length_counts() -> Verdict {
    let stirling = stirling_first_kind(40);
    let mut cases = 0;
    for k in 0..=40usize {
        let dist = absolute_length_distribution(k);
        let total: BigUint = dist.iter().sum();
        if total != factorial(k) {
            return (false, format!("counts of S_{k} sum to {total}"));
        }
        for i in 0..=k {
            let count = dist.get(i).cloned().unwrap_or_default();
            let expected = stirling[k][k - i].clone();
            if count != expected {
                return (false, format!("k = {k}, i = {i}: {count} vs Stirling {expected}"));
            }
            let bound = BigRational::new(BigInt::from(k).pow(2 * i as u32), BigInt::from(factorial(i)));
            if int(&count) > bound {
                return (false, format!("k = {k}, i = {i}: {count} exceeds k^(2i)/i!"));
            }
            cases += 1;
        }
    }
    (true, format!("{cases} (k, i) pairs, bound and Σ = k! hold"))
}

fn product_formula() -> Verdict {
    for code in 0..243u32 {
        let digit = |i: u32| ((code / 3u32.pow(i)) % 3) as u64;
        let p = KimOhParams::new(digit(0), digit(1), digit(2), digit(3), digit(4));
        let dp = f_skew_chain_dp(&kimoh_shape(&p));
        let formula = kimoh_count(&p).unwrap();
        if dp != formula {
            return (false, format!("({p}): formula {formula}, chain count {dp}"));
        }
    }
    let ones = kimoh_count(&KimOhParams::new(1, 1, 1, 1, 1)).unwrap();
    let zeros = kimoh_count(&KimOhParams::default()).unwrap();
    let ok = ones == BigUint::from(42u32) && zeros.is_one();
    (ok, format!("243 parameter sets agree; (1,1,1,1,1) → {ones}, (0,0,0,0,0) → {zeros}"))
}

/// Fitted constants of the small-μ sweep, frozen as regression values.
const FROZEN_FIRST_ORDER: f64 = 0.267_262;
const FROZEN_SECOND_ORDER: f64 = 0.035_157;

fn sweep_shapes() -> Vec<Partition> {
    let mut shapes = Vec::new();
    for m in 3..=16usize {
        shapes.push(Partition::new((1..=m).rev().collect()).unwrap());
    }
    for m in 2..=12usize {
        shapes.push(Partition::new((1..=m).rev().map(|r| r + m).collect()).unwrap());
    }
    for id in ["t1r1", "t1r2", "t1r3", "t1r4", "t1r5", "t1r6", "t2r1", "t2r3", "t2r4", "t2r5", "t2r6", "t2r7"] {
        let fam = find_family(id).unwrap();
        for n in [4u64, 16, 64, 256] {
            let shape = kimoh_shape(&fam.instantiate(n));
            let outer = shape.outer().clone();
            if outer.size() <= 1200 && outer.rows() <= 40 && outer.rows() >= 2 && !shapes.contains(&outer) {
                shapes.push(outer);
            }
        }
    }
    shapes
}

fn small_mu_sweep() -> Verdict {
    let mus: Vec<Partition> = ["1", "2", "2,1"].iter().map(|s| s.parse().unwrap()).collect();
    let mut first = 0.0f64;
    let mut second = 0.0f64;
    let mut cases = 0;
    for lam in sweep_shapes() {
        let n = lam.size() as f64;
        for mu in mus.iter().filter(|mu| lam.contains(mu)) {
            let k = mu.size() as f64;
            let shape = SkewShape::new(lam.clone(), mu.clone()).unwrap();
            let a = a_ratio_from_count(&lam, mu, &f_skew_determinant(&shape).unwrap());
            let dev = (&a - BigRational::one()).abs().to_f64().unwrap();
            first = first.max(dev / (k.powf(1.5) / n.sqrt()));
            if mu.size() >= 2 {
                let approx = second_order_approx(&lam, mu).unwrap();
                let dev2 = (&a - approx).abs().to_f64().unwrap();
                second = second.max(dev2 / (k.powi(3) / n));
            }
            cases += 1;
        }
    }
    let within = |fitted: f64, frozen: f64| fitted <= frozen && fitted >= 0.99 * frozen;
    let ok = within(first, FROZEN_FIRST_ORDER) && within(second, FROZEN_SECOND_ORDER);
    (
        ok,
        format!(
            "{cases} pairs; fitted C = {first:.6} (frozen {FROZEN_FIRST_ORDER}), C′ = {second:.6} (frozen {FROZEN_SECOND_ORDER})"
        ),
    )
}

fn records(id: &str, ns: &[u64]) -> Vec<FamilyRecord> {
    family_records(&find_family(id).unwrap(), ns, DEFAULT_CELL_BUDGET).unwrap()
}

fn family_t1r4_constant() -> Verdict {
    let recs = records("t1r4", &[10_000, 100_000, 1_000_000, 10_000_000]);
    let fit = fit_leading_term(&recs, 0.0).unwrap();
    let gaps: Vec<f64> = recs.iter().map(|r| (r.log_a.value - 0.5).abs()).collect();
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let in_range = (0.35..=0.65).contains(&fit.constant);
    let gap_text: Vec<String> = gaps.iter().map(|g| format!("{g:.5}")).collect();
    (
        in_range && monotone,
        format!(
            "fitted constant {:.5} (in [0.35, 0.65]: {in_range}); |log A − 1/2| = [{}] (monotone: {monotone})",
            fit.constant,
            gap_text.join(", ")
        ),
    )
}

fn family_t2r7_linear() -> Verdict {
    let rec = &records("t2r7", &[1_000_000])[0];
    let per_n = rec.log_a.value / rec.n as f64;
    let ok = (per_n - 0.56746).abs() <= 0.005;
    (ok, format!("log A / n = {per_n:.6} at n = 10^6 (target 0.56746 ± 0.005)"))
}

fn family_t2r5_constant() -> Verdict {
    let recs = records("t2r5", &[10_000, 100_000, 1_000_000]);
    let fit = fit_leading_term(&recs, 0.7).unwrap();
    let ok = (-0.35..=-0.15).contains(&fit.constant);
    let scaled: Vec<String> =
        recs.iter().map(|r| format!("{:.4}", r.log_a.value / (r.n as f64).powf(0.7))).collect();
    (ok, format!("fitted constant {:.5} (target [−0.35, −0.15]); log A / n^0.7 = [{}]", fit.constant, scaled.join(", ")))
}

/// Fixed-point and length statistics of every permutation of `k` elements, by Heap's algorithm.
fn for_each_permutation_stats(k: usize, mut visit: impl FnMut(usize, usize)) {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut stats = |perm: &[usize]| {
        let mut seen = vec![false; k];
        let (mut cycles, mut fixed) = (0, 0);
        for start in 0..k {
            if seen[start] {
                continue;
            }
            cycles += 1;
            if perm[start] == start {
                fixed += 1;
            }
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
        visit(fixed, k - cycles);
    };
    stats(&perm);
    let mut c = vec![0usize; k];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            stats(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn bound_domination_and_omega() -> Verdict {
    let a = calibrate_a_exact(10).unwrap();
    let mut pairs = 0;
    for n in 0..=10 {
        for lam in Partition::all(n) {
            for k in 0..=n {
                for (mu, skew) in skew_counts_from_outer(&lam, k).unwrap() {
                    let exact = a_ratio_from_count(&lam, &mu, &skew);
                    let bound = b_upper_fs_exact(&lam, &mu, &a).unwrap();
                    if bound < exact {
                        return (false, format!("B < A at ({lam})/({mu})"));
                    }
                    pairs += 1;
                }
            }
        }
    }
    let etas = [q(1, 8), q(1, 5)];
    for k in 0..=10usize {
        let constraints: Vec<(usize, usize)> = etas
            .iter()
            .map(|eta| {
                let kq = BigRational::from(BigInt::from(k));
                let fixed = (eta * &kq).floor().to_integer().to_usize().unwrap();
                let rest = BigRational::one() - eta;
                let min_len = (&rest * &rest * kq).ceil().to_integer().to_usize().unwrap();
                (fixed, min_len)
            })
            .collect();
        let mut brute = vec![0u64; etas.len()];
        for_each_permutation_stats(k, |fixed, length| {
            for (slot, &(f, l)) in brute.iter_mut().zip(&constraints) {
                if fixed == f && length >= l {
                    *slot += 1;
                }
            }
        });
        for (eta, expected) in etas.iter().zip(&brute) {
            let got = count_omega(k, eta).unwrap();
            if got != BigUint::from(*expected) {
                return (false, format!("count_omega(k = {k}, η = {eta}) = {got}, brute force {expected}"));
            }
        }
    }
    (true, format!("a = {} (calibrated on n ≤ 10); B ≥ A on {pairs} pairs; Ω counts match for k ≤ 10", a))
}

fn property_coverage() -> Verdict {
    let t1 = conjecture_envelope_check(&records("t1r4", &[10_000, 100_000, 1_000_000, 10_000_000]));
    let t2 = conjecture_envelope_check(&records("t2r5", &[10_000, 100_000, 1_000_000, 10_000_000]));
    let bounded = |c: Option<f64>| c.is_some_and(|c| c.is_finite() && c < 10.0);
    let envelope_ok = bounded(t1.empirical_constant)
        && !t1.diverging
        && bounded(t2.empirical_constant)
        && !t2.diverging
        && t2.sign == Some(Sign::Negative);

    let mut bands_ok = true;
    for (lam, mu) in all_pairs(7) {
        let spec = DiagnosticSpec { alpha_of_n: 3, beta_of_k: 2, r: 1 };
        let report = partial_sums_by_length(&lam, &mu, spec).unwrap();
        for scheme in [BandScheme::Truncation, BandScheme::Balanced] {
            let sum = report.scheme(scheme).fold(BigRational::zero(), |acc, b| acc + &b.sum);
            bands_ok &= sum == report.total;
        }
    }
    (
        envelope_ok && bands_ok,
        format!(
            "envelope C: t1r4 {:.4}, t2r5 {:.4} (sign {}); no divergence flagged; bands sum to A on all pairs n ≤ 7: {bands_ok}",
            t1.empirical_constant.unwrap_or(f64::NAN),
            t2.empirical_constant.unwrap_or(f64::NAN),
            t2.sign.map_or("none".to_owned(), |s| format!("{s:?}").to_lowercase())
        ),
    )
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "three-way skew count agreement, n ≤ 8", budget: Duration::from_secs(60), run: skew_count_agreement },
        Criterion { id: 2, title: "branching and level-set identities, n ≤ 10", budget: Duration::from_secs(60), run: level_sets },
        Criterion { id: 3, title: "absolute-length counts, k ≤ 40", budget: Duration::from_secs(10), run: length_counts },
        Criterion { id: 4, title: "product formula on {0,1,2}^5", budget: Duration::from_secs(120), run: product_formula },
        Criterion { id: 5, title: "small-μ deviation envelopes", budget: Duration::from_secs(60), run: small_mu_sweep },
        Criterion { id: 6, title: "t1r4 leading constant 1/2", budget: Duration::from_secs(300), run: family_t1r4_constant },
        Criterion { id: 7, title: "t2r7 log A / n ≈ 0.56746", budget: Duration::from_secs(300), run: family_t2r7_linear },
        Criterion { id: 8, title: "t2r5 constant −1/4 at exponent 7/10", budget: Duration::from_secs(300), run: family_t2r5_constant },
        Criterion { id: 9, title: "B ≥ A with calibrated a; Ω counts", budget: Duration::from_secs(120), run: bound_domination_and_omega },
        Criterion { id: 10, title: "property coverage of the asymptotic statements", budget: Duration::from_secs(300), run: property_coverage },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let (ok, detail) = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = ok && in_time;
        if !pass {
            failures += 1;
        }
        let timing = format!("{:.2}s of {}s", elapsed.as_secs_f64(), c.budget.as_secs());
        println!(
            "{} criterion {:>2}: {}: {detail} [{timing}{}]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
