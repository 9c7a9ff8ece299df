//! Reference implementations written directly from the defining formulas,
//! used to check the library from the outside.

#![allow(dead_code)]

use rand::Rng;

pub type Q = [f64; 4];
pub type O = [f64; 8];

/// Hamilton product written out componentwise.
pub fn hamilton(a: Q, b: Q) -> Q {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn qconj(a: Q) -> Q {
    [a[0], -a[1], -a[2], -a[3]]
}

pub fn qadd(a: Q, b: Q) -> Q {
    std::array::from_fn(|n| a[n] + b[n])
}

pub fn qsub(a: Q, b: Q) -> Q {
    std::array::from_fn(|n| a[n] - b[n])
}

pub fn qscale(a: Q, s: f64) -> Q {
    a.map(|x| x * s)
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `(a + bℓ)(c + dℓ) = (ac - d̄b) + (da + bc̄)ℓ` with `e4 = ℓ`, `e5 = iℓ`,
/// `e6 = jℓ`, `e7 = kℓ`.
pub fn cayley_dickson(x: O, y: O) -> O {
    let (a, b): (Q, Q) = (x[..4].try_into().unwrap(), x[4..].try_into().unwrap());
    let (c, d): (Q, Q) = (y[..4].try_into().unwrap(), y[4..].try_into().unwrap());
    let lo = qsub(hamilton(a, c), hamilton(qconj(d), b));
    let hi = qadd(hamilton(d, a), hamilton(b, qconj(c)));
    std::array::from_fn(|n| if n < 4 { lo[n] } else { hi[n - 4] })
}

pub const BASIS: [Q; 4] = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];

pub fn random_q(rng: &mut impl Rng, scale: f64) -> Q {
    std::array::from_fn(|_| rng.gen_range(-scale..=scale))
}

pub fn random_o(rng: &mut impl Rng, scale: f64) -> O {
    std::array::from_fn(|_| rng.gen_range(-scale..=scale))
}

/// Rejection sample of `N` coordinates with `0.5 <= |p| <= 2` and vector
/// part at least `0.05` long.
pub fn shell_point<const N: usize>(rng: &mut impl Rng) -> [f64; N] {
    loop {
        let p: [f64; N] = std::array::from_fn(|_| rng.gen_range(-2.0..=2.0));
        let r = norm(&p);
        if (0.5..=2.0).contains(&r) && norm(&p[1..]) >= 0.05 {
            return p;
        }
    }
}

/// `Σ qⁿ aₙ` by repeated multiplication.
pub fn left_series(coeffs: &[Q], q: Q) -> Q {
    let mut power = BASIS[0];
    let mut acc = [0.0; 4];
    for &a in coeffs {
        acc = qadd(acc, hamilton(power, a));
        power = hamilton(power, q);
    }
    acc
}

/// `Σ_m a_m p b_m` for explicit sandwich terms.
pub fn sandwich_sum(terms: &[(Q, Q)], p: Q) -> Q {
    terms.iter().fold([0.0; 4], |acc, &(a, b)| qadd(acc, hamilton(hamilton(a, p), b)))
}

/// One row of `fixtures/exit_codes.json`.
#[derive(Debug, serde::Deserialize)]
pub struct ExitCase {
    pub args: Vec<String>,
    pub exit: i32,
    #[serde(default)]
    pub stdout_contains: Option<String>,
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// The exit-code fixture set with `@fixtures/` expanded to an absolute path.
pub fn exit_cases() -> Vec<ExitCase> {
    let dir = fixtures_dir();
    let text = std::fs::read_to_string(dir.join("exit_codes.json")).unwrap();
    let mut cases: Vec<ExitCase> = serde_json::from_str(&text).unwrap();
    let prefix = format!("{}/", dir.display());
    for case in &mut cases {
        for a in &mut case.args {
            *a = a.replace("@fixtures/", &prefix);
        }
    }
    cases
}

fn literal(rng: &mut impl Rng) -> String {
    match rng.gen_range(0..3) {
        0 => format!("{}", rng.gen_range(-4.0..=4.0f64)),
        1 => ["i", "j", "k"][rng.gen_range(0..3)].to_string(),
        _ => {
            let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-4.0..=4.0));
            format!("({},{},{},{})", c[0], c[1], c[2], c[3])
        }
    }
}

/// Random expression source with degree at most `max_degree`. Returns the
/// text and its degree bound.
pub fn random_expr(rng: &mut impl Rng, max_degree: u32, depth: u32) -> (String, u32) {
    if depth == 0 || rng.gen_bool(0.25) {
        return if max_degree > 0 && rng.gen_bool(0.6) {
            ("q".into(), 1)
        } else {
            (literal(rng), 0)
        };
    }
    match rng.gen_range(0..7) {
        0 | 1 => {
            let (a, da) = random_expr(rng, max_degree, depth - 1);
            let (b, db) = random_expr(rng, max_degree, depth - 1);
            let op = if rng.gen_bool(0.5) { "+" } else { "-" };
            (format!("({a} {op} {b})"), da.max(db))
        }
        2 | 3 => {
            let (a, da) = random_expr(rng, max_degree, depth - 1);
            let (b, db) = random_expr(rng, max_degree - da, depth - 1);
            (format!("{a}*{b}"), da + db)
        }
        4 => {
            let (a, da) = random_expr(rng, max_degree.min(2), depth - 1);
            let e = rng.gen_range(0..=max_degree / da.max(1));
            (format!("({a})^{e}"), da * e)
        }
        5 => {
            let (a, da) = random_expr(rng, max_degree, depth - 1);
            if rng.gen_bool(0.5) {
                (format!("conj({a})"), da)
            } else {
                (format!("-{a}"), da)
            }
        }
        _ => {
            let (a, da) = random_expr(rng, max_degree, depth - 1);
            let (l, r) = (literal(rng), literal(rng));
            let (l, r) = (l.trim_start_matches('-'), r.trim_start_matches('-'));
            (format!("bar({l},{r})({a})"), da)
        }
    }
}
