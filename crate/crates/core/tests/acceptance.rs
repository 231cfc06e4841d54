//! Acceptance criteria. Runs as a plain binary (`harness = false`) and
//! prints one PASS/FAIL line per criterion; any failure makes it exit 1.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ecn_tag::allocator::{between_tags, retag_region};
use ecn_tag::arithmetic::{add, build_quotient, check_group, mul_count, GroupCheckConfig, Universe};
use ecn_tag::cave::{explore, generate_cave, verify_tagging, Policy, Violation};
use ecn_tag::cli::dispatch;
use ecn_tag::sorter::{heuristic_insert, heuristic_sort};
use ecn_tag::{zwischenraum, EcnTag, Region};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn t(s: &str) -> EcnTag {
    s.parse().unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut stdin: &[u8] = &[];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("ecn").chain(args.iter().copied());
    let code = dispatch(argv, &mut stdin, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn golden_sequence() -> Outcome {
    let start = Instant::now();
    for (m, want) in [(1, "2.1"), (2, "2.2"), (267, "2.267")] {
        let m = m.to_string();
        let (code, out) = cli(&["between", "2", "3", "--count", "267", "--index", &m]);
        ensure(code == 0 && out == format!("{want}\n"), || {
            format!("index {m}: exit {code}, output {out:?}, want {want}")
        })?;
    }
    let run: Vec<EcnTag> = (1..=267)
        .map(|m| {
            let m = m.to_string();
            cli(&["between", "2", "3", "-n", "267", "-m", &m]).1.trim().parse().unwrap()
        })
        .collect();
    ensure(run.windows(2).all(|w| w[0] < w[1]), || "run not ascending".into())?;
    ensure(run[0] > t("2") && run[266] < t("3"), || "run leaves (2, 3)".into())?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("2.1, 2.2, 2.267; 267-tag run ascending in {:?}", start.elapsed()))
}

fn golden_retag() -> Outcome {
    let region = Region::new(t("2"), t("3")).unwrap();
    let out = retag_region(&region, &[t("2.1"), t("2.2")], 2).map_err(|e| e.to_string())?;
    ensure(out == vec![t("2.1"), t("2.3")], || format!("got {out:?}"))?;
    ensure(region.lower() == &t("2").into() && region.upper() == &t("3").into(), || {
        "boundaries changed".into()
    })?;
    Ok("[2.1, 2.2] -> [2.1, 2.3] inside (2, 3)".into())
}

/// All canonical tags of depth at most 3 with coefficients in -5..=5.
fn small_universe() -> Vec<EcnTag> {
    let mut out = Vec::new();
    for len in 1..=3usize {
        let mut digits = vec![-5i64; len];
        loop {
            if len == 1 || digits[len - 1] != 0 {
                out.push(EcnTag::from_coefficients(digits.clone()));
            }
            let mut i = 0;
            while i < len && digits[i] == 5 {
                digits[i] = -5;
                i += 1;
            }
            if i == len {
                break;
            }
            digits[i] += 1;
        }
    }
    out
}

fn order_oracle() -> Outcome {
    let start = Instant::now();
    let universe = small_universe();
    let distinct: HashSet<&EcnTag> = universe.iter().collect();
    ensure(universe.len() == 11 + 10 * 11 + 10 * 121 && distinct.len() == universe.len(), || {
        format!("universe has {} tags", universe.len())
    })?;
    // Base 16 exceeds 2 * 5 + 1, so the padded digit expansion decides order.
    let key = |tag: &EcnTag| -> i64 {
        (0..3)
            .map(|d| {
                let c: i64 = tag.coefficient(d).try_into().unwrap();
                c * 16i64.pow(2 - d as u32)
            })
            .sum()
    };
    let keys: Vec<i64> = universe.iter().map(key).collect();
    let mut disagreements = 0usize;
    for (a, ka) in universe.iter().zip(&keys) {
        for (b, kb) in universe.iter().zip(&keys) {
            if a.cmp(b) != ka.cmp(kb) {
                disagreements += 1;
            }
        }
    }
    ensure(disagreements == 0, || format!("{disagreements} disagreements"))?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{} tags, {} pairs, 0 disagreements in {:?}",
        universe.len(),
        universe.len().pow(2),
        start.elapsed()
    ))
}

fn dense_insertion() -> Outcome {
    let start = Instant::now();
    let mut tags = vec![t("1"), t("2")];
    for _ in 0..10_000 {
        let fresh = between_tags(&tags[0], &tags[1], 1, 1).map_err(|e| e.to_string())?;
        tags.insert(1, fresh);
    }
    let elapsed = start.elapsed();
    ensure(tags.windows(2).all(|w| w[0] < w[1]), || "set not strictly ordered".into())?;
    let max_depth = tags.iter().map(EcnTag::depth).max().unwrap();
    ensure(max_depth <= 10_002, || format!("max depth {max_depth}"))?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("10002 tags ordered, max depth {max_depth}, {elapsed:?}"))
}

fn group_axioms() -> Outcome {
    let start = Instant::now();
    let config = GroupCheckConfig {
        samples: 10_000,
        window: 20,
        ..GroupCheckConfig::default()
    };
    for universe in [Universe::einheit([0]), Universe::einheit([2]), Universe::einheit([0, 1])] {
        let report = check_group(&universe, &config);
        ensure(report.is_group(), || format!("{universe:?}: {report:?}"))?;
        ensure(report.closure.cases == 10_000 && report.associativity.cases == 10_000, || {
            "sample count".into()
        })?;
    }
    for factor in 2..=6 {
        let q = build_quotient(0, factor);
        ensure(q.is_associative() && q.is_abelian() && q.is_well_defined(4), || {
            format!("quotient by {factor} fails")
        })?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("group laws hold; quotients 2..=6 abelian and associative, {:?}", start.elapsed()))
}

fn random_tag(rng: &mut ChaCha8Rng) -> EcnTag {
    let len = rng.gen_range(1..=6);
    EcnTag::from_coefficients((0..len).map(|_| rng.gen_range(-1000i64..=1000)))
}

fn monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut strict = 0;
    for _ in 0..100_000 {
        let (a, b, k) = (random_tag(&mut rng), random_tag(&mut rng), random_tag(&mut rng));
        if a < b {
            strict += 1;
            ensure(add(&a, &k) < add(&b, &k), || format!("{a} < {b} but not after + {k}"))?;
        }
    }
    let minus_one = BigInt::from(-1);
    for _ in 0..1_000 {
        let mut chain: Vec<EcnTag> = (0..20).map(|_| random_tag(&mut rng)).collect();
        chain.sort();
        chain.dedup();
        let image: Vec<EcnTag> = chain.iter().map(|x| mul_count(x, &minus_one)).collect();
        ensure(image.windows(2).all(|w| w[0] > w[1]), || "x(-1) did not reverse a chain".into())?;
    }
    Ok(format!("{strict} ordered pairs stay ordered under +k; 1000 chains reversed by x(-1)"))
}

fn zwischenraum_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..1_000 {
        let mut seq: Vec<EcnTag> = (0..rng.gen_range(2..40)).map(|_| random_tag(&mut rng)).collect();
        seq.sort();
        seq.dedup();
        if seq.len() < 2 {
            continue;
        }
        // Half the maps are affine, half send the sequence onto an
        // arbitrary ascending target.
        let image: Vec<EcnTag> = if case % 2 == 0 {
            let p = BigInt::from(rng.gen_range(1..50));
            let k = random_tag(&mut rng);
            seq.iter().map(|x| add(&mul_count(x, &p), &k)).collect()
        } else {
            let mut target: Vec<EcnTag> = Vec::new();
            while target.len() < seq.len() {
                target.push(random_tag(&mut rng));
                target.sort();
                target.dedup();
            }
            target
        };
        ensure(image.windows(2).all(|w| w[0] < w[1]), || "map not increasing".into())?;
        let i = rng.gen_range(0..seq.len() - 1);
        let j = rng.gen_range(i + 1..seq.len());
        let z = zwischenraum(&seq, &seq[i], &seq[j]).map_err(|e| e.to_string())?;
        let z_img = zwischenraum(&image, &image[i], &image[j]).map_err(|e| e.to_string())?;
        let mapped = &image[i + 1..j];
        // Filtering oracle for the image's in-between set.
        let filtered: Vec<&EcnTag> = image.iter().filter(|x| image[i] < **x && **x < image[j]).collect();
        ensure(mapped == z_img && z_img.len() == z.len() && filtered.len() == z.len(), || {
            format!("case {case}: invariance broken")
        })?;
    }
    Ok("1000 sequences: f(Z(a,c)) = Z(f(a),f(c)) element-wise and in size".into())
}

fn sorter() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for case in 0..1_000 {
        let len = rng.gen_range(0..=1_000);
        let items: Vec<f64> = (0..len)
            .map(|_| match case % 3 {
                0 => rng.gen_range(-1e6..1e6),
                1 => (rng.gen::<f64>() * 20.0).exp(),
                _ => rng.gen_range(0..50) as f64,
            })
            .collect();
        let mut reference = items.clone();
        reference.sort_by(f64::total_cmp);
        let (out, stats) = heuristic_sort(&items, true, Some(16)).map_err(|e| e.to_string())?;
        ensure(out == reference, || format!("case {case}: output differs from reference sort"))?;
        ensure(stats.max_probe_ratio <= 1.0, || format!("case {case}: probes exceed length + 1"))?;
        failures += stats.failures.len();
    }
    for case in 0..200 {
        let (a, d) = (rng.gen_range(-1000..1000), rng.gen_range(1..100));
        let keys: Vec<f64> = (0..rng.gen_range(2..1000)).map(|i| (a + i * d) as f64).collect();
        let mut items = keys.clone();
        items.shuffle(&mut rng);
        for v in items.iter().take(50) {
            let p = heuristic_insert(&keys, *v, 1).map_err(|e| format!("case {case}: {e}"))?;
            ensure(p.iterations == 1 && p.slot == keys.partition_point(|k| k <= v), || {
                format!("case {case}: arithmetic insertion of {v} took {} iterations", p.iterations)
            })?;
        }
        // Growing an arithmetic run in order also never needs a second try.
        let (_, stats) = heuristic_sort(&keys, false, Some(1)).map_err(|e| e.to_string())?;
        ensure(stats.per_element_iters.iter().all(|&i| i == 1), || "arithmetic run".into())?;
    }
    Ok(format!("1000 instances match reference sort ({failures} fallbacks); arithmetic keys place in 1 iteration"))
}

fn simulator() -> Outcome {
    let mut total_visits = 0;
    for run in 0..100u64 {
        let (cave_seed, policy_seed) = (run * 7919 + 1, run * 104_729 + 3);
        let policy = Policy::Random { seed: policy_seed };
        let mut cave = generate_cave(cave_seed, 6, 4);
        let log = explore(&mut cave, policy, 1_000 + run as usize * 10);
        ensure(log.len() >= 1_000, || format!("run {run}: only {} visits", log.len()))?;
        let report = verify_tagging(&cave);
        let duplicates = report
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::DuplicateTag { .. }))
            .count();
        let region = report
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::OutsideParent { .. } | Violation::RegionNotNested { .. }))
            .count();
        ensure(report.passed(), || {
            format!("run {run}: {duplicates} duplicates, {region} region violations, {:?}", report.violations)
        })?;

        let mut replay_cave = generate_cave(cave_seed, 6, 4);
        let replay = explore(&mut replay_cave, policy, 1_000 + run as usize * 10);
        let text = |log: &[ecn_tag::cave::Visit]| log.iter().map(|v| format!("{v}\n")).collect::<String>();
        ensure(text(&log) == text(&replay), || format!("run {run}: replay differs"))?;
        total_visits += log.len();
    }
    Ok(format!("100 runs, {total_visits} visits, 0 duplicates, 0 region violations, replay exact"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 golden allocation sequence", golden_sequence),
        ("2 golden re-tag", golden_retag),
        ("3 order totality vs rational embedding", order_oracle),
        ("4 dense insertion", dense_insertion),
        ("5 group axioms and quotients", group_axioms),
        ("6 monotonicity", monotonicity),
        ("7 zwischenraum invariance", zwischenraum_invariance),
        ("8 heuristic sorter", sorter),
        ("9 cave simulator", simulator),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
