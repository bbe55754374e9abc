//! Brute-force oracles shared by the integration tests. None of them call into
//! the library's arithmetic.

#![allow(dead_code)]

use irrlat::{IntMatrix, IntegralLattice, SublatticeEmbedding};
use num_bigint::BigInt;
use rand::Rng;

pub fn to_big(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    let data = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    IntMatrix::from_rows_with_cols(data, cols).unwrap()
}

/// Laplace expansion along the first row.
pub fn det_cofactor(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    let mut total = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] as i128 * det_cofactor(&minor(m, 0, j));
    }
    total
}

pub fn minor(m: &[Vec<i64>], row: usize, col: usize) -> Vec<Vec<i64>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Elementary divisors from determinantal divisors: `e_k = Δ_k / Δ_{k−1}`
/// where `Δ_k` is the gcd of all `k × k` minors. Stops at the rank.
pub fn elementary_divisors_by_minors(m: &[Vec<i64>], cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut delta = 0i128;
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m[i][j]).collect())
                    .collect();
                delta = gcd(delta, det_cofactor(&sub));
            }
        }
        if delta == 0 {
            break;
        }
        out.push(delta / prev);
        prev = delta;
    }
    out
}

/// `[ℤʳ : rowspace(m)]` by counting integer points of the half-open
/// fundamental parallelepiped spanned by the rows.
pub fn index_by_cosets(m: &[Vec<i64>]) -> u64 {
    let r = m.len();
    let det = det_cofactor(m);
    assert!(det != 0);
    // adj[j][i] = (−1)^(i+j) det(minor(i, j)), so p·adj = det·t with p = t·m
    let adj: Vec<Vec<i128>> = (0..r)
        .map(|j| {
            (0..r)
                .map(|i| {
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    s * det_cofactor(&minor(m, i, j))
                })
                .collect()
        })
        .collect();
    let lo: Vec<i64> = (0..r).map(|c| m.iter().map(|row| row[c].min(0)).sum()).collect();
    let hi: Vec<i64> = (0..r).map(|c| m.iter().map(|row| row[c].max(0)).sum()).collect();
    let (sign, abs) = (det.signum(), det.abs());
    let mut count = 0u64;
    let mut p = lo.clone();
    loop {
        let inside = (0..r).all(|i| {
            let v: i128 = (0..r).map(|c| p[c] as i128 * adj[c][i]).sum::<i128>() * sign;
            (0..abs).contains(&v)
        });
        if inside {
            count += 1;
        }
        let mut c = 0;
        loop {
            if c == r {
                return count;
            }
            if p[c] < hi[c] {
                p[c] += 1;
                break;
            }
            p[c] = lo[c];
            c += 1;
        }
    }
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-bound..=bound);
            g[i][j] = x;
            g[j][i] = x;
        }
    }
    g
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

/// Random nondegenerate lattice together with its Gram rows.
pub fn random_lattice<R: Rng>(rng: &mut R, n: usize, bound: i64) -> (IntegralLattice, Vec<Vec<i64>>) {
    loop {
        let g = random_symmetric(rng, n, bound);
        if det_cofactor(&g) != 0 {
            return (IntegralLattice::new(to_big(&g, n)).unwrap(), g);
        }
    }
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn embedding(l: &IntegralLattice, rows: &[Vec<i64>]) -> Option<SublatticeEmbedding> {
    SublatticeEmbedding::new(l.clone(), to_big(rows, l.rank())).ok()
}

/// Least genus over the constraint system by plain enumeration of `(g, k)`.
pub fn min_genus_exhaustive(n: i64) -> (i64, Vec<i64>) {
    for g in 0.. {
        let ks: Vec<i64> = (0..=g)
            .filter(|&k| g - k - n >= 0 && 2 * n - 1 - (g - k) - k * (k + 1) / 2 <= 0)
            .collect();
        if !ks.is_empty() {
            return (g, ks);
        }
    }
    unreachable!()
}

/// Least `k` with `k(k+1)/2 ≥ m` by linear scan.
pub fn triangular_scan(m: u64) -> u64 {
    (0..).find(|k| k * (k + 1) / 2 >= m).unwrap()
}

/// Unmemoized divisor recursion for small inputs.
pub fn p1n_naive(n: u32, d: u64) -> u128 {
    if n == 2 {
        return ((d - 1) * (d - 1)) as u128;
    }
    (1..=d)
        .filter(|e| d % e == 0)
        .map(|e| {
            let d = d as u128;
            (d / e as u128) * (p1n_naive(n - 1, e) + d - 1) + 1 - d
        })
        .max()
        .unwrap()
}

pub fn isqrt_u128(x: u128) -> u128 {
    let (mut lo, mut hi) = (0u128, 1u128 << 64);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if mid.checked_mul(mid).is_some_and(|s| s <= x) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `(D′, index)` for every `D′ ∈ [2, d_max]` reachable from `D` under degree
/// `deg`: scans every candidate index `i ∈ [1, deg²¹]` and solves
/// `i²·(D − 1) = deg²¹·(D′ − 1)` for `D′`, then applies the ratio window.
pub fn k3_targets_by_scan(d: u128, deg: u128, d_max: u128) -> Vec<(u128, u128)> {
    let p = deg.pow(21);
    let mut hits = Vec::new();
    for i in 1..=p {
        let num = i * i * (d - 1);
        if num % p != 0 {
            continue;
        }
        let dp = num / p + 1;
        if dp > d_max {
            break;
        }
        if dp < 2 {
            continue;
        }
        // deg^−21 ≤ (D − 1)/(D′ − 1) ≤ deg^21
        let (a, b) = (d - 1, dp - 1);
        if b <= a * p && a <= b * p {
            hits.push((dp, i));
        }
    }
    hits
}

/// JSON flattening with the same row conventions as the text renderer,
/// written independently for round-trip tests.
pub fn flatten_json(v: &serde_json::Value) -> Vec<(String, String)> {
    use serde_json::Value;
    fn leaf(v: &Value) -> Option<String> {
        match v {
            Value::String(s) => Some(s.clone()),
            Value::Number(n) => Some(n.to_string()),
            Value::Bool(b) => Some(b.to_string()),
            Value::Null => Some("null".to_string()),
            _ => None,
        }
    }
    fn go(v: &Value, path: &str, out: &mut Vec<(String, String)>) {
        let child = |k: &str| {
            if path.is_empty() {
                k.to_string()
            } else {
                format!("{path}.{k}")
            }
        };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| go(x, &child(k), out)),
            Value::Array(xs) => {
                if let Some(parts) = xs.iter().map(leaf).collect::<Option<Vec<_>>>() {
                    out.push((path.to_string(), format!("[{}]", parts.join(", "))));
                } else {
                    xs.iter()
                        .enumerate()
                        .for_each(|(i, x)| go(x, &child(&i.to_string()), out));
                }
            }
            _ => out.push((path.to_string(), leaf(v).unwrap())),
        }
    }
    let mut out = Vec::new();
    go(v, "", &mut out);
    out
}

/// Splits aligned `path  value` lines.
pub fn parse_text(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map(|line| {
            let (path, rest) = line.split_once(' ').unwrap_or((line, ""));
            (path.to_string(), rest.trim_start().to_string())
        })
        .collect()
}
