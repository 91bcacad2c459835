#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use fpgft::random::{
    random_fixed_point, random_member, random_params, random_series, rescale_to_phi,
};
use fpgft::{ClassParams, Complex64, HullWeights, Series};
use rand::Rng;
use rand_distr::{Distribution, Exp1};

pub struct Case {
    pub params: ClassParams,
    pub f: Series,
}

/// Random admissible parameters (m <= max_m), fixed point, k in 1..=5 and
/// truncation in [k, max_trunc].
pub fn member_case<R: Rng>(rng: &mut R, max_m: u32, max_trunc: u32) -> Case {
    let params = random_params(rng, max_m);
    let w = random_fixed_point(rng, 0.9);
    let k = rng.gen_range(1..=5);
    let trunc = rng.gen_range(k..=max_trunc.max(k));
    let f = random_member(rng, &params, w, k, trunc).unwrap();
    Case { params, f }
}

pub fn scaled_case<R: Rng>(rng: &mut R, max_m: u32, max_trunc: u32, fraction: f64) -> Case {
    let params = random_params(rng, max_m);
    let w = random_fixed_point(rng, 0.9);
    let k = rng.gen_range(1..=5);
    let trunc = rng.gen_range(k..=max_trunc.max(k));
    let f = random_series(rng, w, k, trunc).unwrap();
    let f = rescale_to_phi(&f, &params, fraction).unwrap();
    Case { params, f }
}

/// Like [`scaled_case`] with `k <= max_k` and at most `span + 1` indices.
pub fn scaled_case_with<R: Rng>(
    rng: &mut R,
    max_m: u32,
    max_k: u32,
    span: u32,
    fraction: f64,
) -> Case {
    let params = random_params(rng, max_m);
    let w = random_fixed_point(rng, 0.9);
    let k = rng.gen_range(1..=max_k);
    let trunc = k + rng.gen_range(0..=span);
    let f = random_series(rng, w, k, trunc).unwrap();
    let f = rescale_to_phi(&f, &params, fraction).unwrap();
    Case { params, f }
}

pub fn rng_fraction<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.5..=1.0)
}

/// Convex weights with random support in [k, trunc]; c0 may be zero.
pub fn random_weights<R: Rng>(rng: &mut R, k: u32, trunc: u32) -> HullWeights {
    let span = trunc - k + 1;
    let size = rng.gen_range(1..=span.min(12));
    let mut raw: BTreeMap<u32, f64> = BTreeMap::new();
    for _ in 0..size {
        let e: f64 = Exp1.sample(rng);
        raw.insert(k + rng.gen_range(0..span), e);
    }
    let c0: f64 = if rng.gen_bool(0.2) {
        0.0
    } else {
        Exp1.sample(rng)
    };
    let total = c0 + raw.values().sum::<f64>();
    let cn: BTreeMap<u32, f64> = raw.into_iter().map(|(n, c)| (n, c / total)).collect();
    let c0 = 1.0 - cn.values().sum::<f64>();
    HullWeights::new(c0.max(0.0), cn, k).unwrap()
}

pub fn offset<R: Rng>(rng: &mut R, rmin: f64, rmax: f64) -> Complex64 {
    let r = rng.gen_range(rmin..rmax);
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, t)
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures() -> PathBuf {
    crate_dir().join("tests").join("fixtures")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[&str], cwd: &Path) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_fpgft"))
        .args(args)
        .current_dir(cwd)
        .env_remove("FPGFT_MAX_TRUNC")
        .output()
        .expect("spawn fpgft");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Golden-file fixtures: (name, args, expected exit code). Paths are relative
/// to the fixtures directory.
pub const GOLDEN_CASES: &[(&str, &[&str], i32)] = &[
    (
        "membership_member",
        &[
            "membership",
            "member.json",
            "--a",
            "0.5",
            "--b",
            "0.1",
            "--m",
            "1",
            "--grid",
        ],
        0,
    ),
    (
        "membership_extreme",
        &[
            "membership",
            "extreme2.json",
            "--a",
            "0.5",
            "--b",
            "0",
            "--m",
            "1",
        ],
        0,
    ),
    (
        "membership_inflated",
        &[
            "membership",
            "extreme2.json",
            "--a",
            "0.5",
            "--b",
            "0.3",
            "--m",
            "1",
        ],
        1,
    ),
    (
        "membership_negative",
        &[
            "membership",
            "negative.json",
            "--a",
            "0.5",
            "--b",
            "0",
            "--m",
            "1",
        ],
        2,
    ),
    (
        "apply_im0",
        &["apply", "member.json", "--op", "im", "--param", "0"],
        0,
    ),
    (
        "apply_im3",
        &["apply", "member.json", "--op", "im", "--param", "3"],
        0,
    ),
    (
        "apply_h2_f0",
        &["apply", "f0.json", "--op", "h2", "--param", "1"],
        0,
    ),
    (
        "apply_h1_oracle",
        &[
            "apply",
            "member.json",
            "--op",
            "h1",
            "--param",
            "3",
            "--oracle-check",
            "0.4,0.1",
        ],
        0,
    ),
    (
        "apply_h1_paper",
        &[
            "apply",
            "member.json",
            "--op",
            "h1",
            "--param",
            "3",
            "--paper-coeff",
            "--oracle-check",
            "0.4,0.1",
        ],
        0,
    ),
    (
        "apply_h2_oracle",
        &[
            "apply",
            "member.json",
            "--op",
            "h2",
            "--param",
            "2.5",
            "--oracle-check",
            "-0.3,-0.6",
        ],
        0,
    ),
    (
        "apply_bad_gamma",
        &["apply", "member.json", "--op", "h1", "--param", "1"],
        2,
    ),
    (
        "extreme_0",
        &[
            "extreme", "--n", "0", "--a", "0.5", "--b", "0", "--m", "1", "--k", "1",
        ],
        0,
    ),
    (
        "extreme_2",
        &[
            "extreme", "--n", "2", "--a", "0.5", "--b", "0", "--m", "1", "--k", "1",
        ],
        0,
    ),
    (
        "extreme_bad_n",
        &[
            "extreme", "--n", "1", "--a", "0.5", "--b", "0", "--m", "1", "--k", "2",
        ],
        2,
    ),
    (
        "decompose_f0",
        &[
            "decompose",
            "f0.json",
            "--a",
            "0.5",
            "--b",
            "0.1",
            "--m",
            "1",
        ],
        0,
    ),
    (
        "decompose_member",
        &[
            "decompose",
            "member.json",
            "--a",
            "0.5",
            "--b",
            "0.1",
            "--m",
            "1",
        ],
        0,
    ),
    (
        "recompose_weights",
        &[
            "recompose",
            "weights.json",
            "--a",
            "0.5",
            "--b",
            "0.1",
            "--m",
            "1",
            "--k",
            "2",
            "--w",
            "0.1,-0.2",
        ],
        0,
    ),
    (
        "recompose_extreme",
        &[
            "recompose",
            "weights_extreme.json",
            "--a",
            "0.5",
            "--b",
            "0",
            "--m",
            "1",
            "--k",
            "1",
        ],
        0,
    ),
    (
        "combine",
        &[
            "combine",
            "member.json",
            "member2.json",
            "--weights",
            "0.25,0.75",
            "--a",
            "0.5",
            "--b",
            "0.1",
            "--m",
            "1",
        ],
        0,
    ),
    ("sweep_extreme", &["sweep", "sweep_extreme.json"], 0),
    ("sweep_file", &["sweep", "sweep_file.json"], 0),
    (
        "gen_random",
        &[
            "gen-random",
            "--seed",
            "7",
            "--a",
            "0.5",
            "--b",
            "0.1",
            "--m",
            "1",
            "--k",
            "2",
            "--trunc",
            "10",
            "--w",
            "0.1,-0.2",
        ],
        0,
    ),
];

pub fn golden_text(run: &Run) -> String {
    format!("exit: {}\n---\n{}", run.code, run.stdout)
}
