//! Plain-text inputs: kernel parameter files, experiment config lines and
//! Boolean truth tables.
//!
//! Kernel files and configs share one line format: `key = value`, with `#`
//! starting a comment and blank lines ignored. Errors carry 1-based line numbers.

use crate::error::{Error, Result};
use crate::monomc::boolean::{BooleanTable, MAX_TABLE_DIM};
use crate::rkhs::{korobov_lambda, KernelHandle, LambdaSeq};
use std::collections::BTreeMap;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses `key = value` lines into `(line, key, value)` triples. Duplicate keys are errors.
pub fn parse_key_values(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| perr(line, "expected key=value"))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.') {
            return Err(perr(line, format!("invalid key {k:?}")));
        }
        if out.iter().any(|(_, key, _)| key == k) {
            return Err(perr(line, format!("duplicate key {k:?}")));
        }
        out.push((line, k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| perr(line, format!("bad value for {key}: {v:?}")))
}

#[derive(Clone, Debug, PartialEq)]
pub enum KernelFileKind {
    Korobov { r: f64, beta0: f64, truncation: usize },
    Finite(Vec<f64>),
    WienerSheet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelParams {
    pub d: usize,
    pub kind: KernelFileKind,
}

impl KernelParams {
    pub fn to_handle(&self) -> Result<KernelHandle> {
        Ok(match &self.kind {
            KernelFileKind::Korobov { r, beta0, truncation } => {
                KernelHandle::periodic(korobov_lambda(*r, *beta0, *truncation)?, self.d)
            }
            KernelFileKind::Finite(l) => KernelHandle::periodic(LambdaSeq::finite(l.clone())?, self.d),
            KernelFileKind::WienerSheet => KernelHandle::wiener_sheet(self.d),
        })
    }
}

const KERNEL_KEYS: [&str; 6] = ["kind", "d", "r", "beta0", "L", "lambda"];

/// Kernel file with keys `kind` (`korobov`, `finite`, `wiener-sheet`), `d`,
/// and per kind `r`, `beta0`, `L` or a comma-separated `lambda` list.
pub fn parse_kernel_params(text: &str) -> Result<KernelParams> {
    let kv = parse_key_values(text)?;
    let last = text.lines().count().max(1);
    let mut map = BTreeMap::new();
    for (line, k, v) in &kv {
        if !KERNEL_KEYS.contains(&k.as_str()) {
            return Err(perr(*line, format!("unknown key {k:?}")));
        }
        map.insert(k.as_str(), (*line, v.as_str()));
    }
    let get = |k: &str| map.get(k).copied();
    let need = |k: &str| get(k).ok_or_else(|| perr(last, format!("missing key {k:?}")));
    let (dl, dv) = need("d")?;
    let d: usize = num(dl, "d", dv)?;
    if d == 0 || d > 64 {
        return Err(perr(dl, "d must lie in 1..=64"));
    }
    let (kl, kind) = need("kind")?;
    let allowed: &[&str] = match kind {
        "korobov" => &["kind", "d", "r", "beta0", "L"],
        "finite" => &["kind", "d", "lambda"],
        "wiener-sheet" => &["kind", "d"],
        other => return Err(perr(kl, format!("unknown kernel kind {other:?}"))),
    };
    for (line, k, _) in &kv {
        if !allowed.contains(&k.as_str()) {
            return Err(perr(*line, format!("key {k:?} does not apply to kind {kind}")));
        }
    }
    let kind = match kind {
        "korobov" => {
            let (rl, rv) = need("r")?;
            let r: f64 = num(rl, "r", rv)?;
            if !(r > 0.5 && r.is_finite()) {
                return Err(perr(rl, "r must be a finite number above 1/2"));
            }
            let beta0 = match get("beta0") {
                Some((l, v)) => {
                    let b: f64 = num(l, "beta0", v)?;
                    if !(b > 0.0 && b <= 1.0) {
                        return Err(perr(l, "beta0 must lie in (0, 1]"));
                    }
                    b
                }
                None => 0.5,
            };
            let truncation = match get("L") {
                Some((l, v)) => {
                    let t: usize = num(l, "L", v)?;
                    if t == 0 || t > 1 << 20 {
                        return Err(perr(l, "L must lie in 1..=2^20"));
                    }
                    t
                }
                None => 64,
            };
            KernelFileKind::Korobov { r, beta0, truncation }
        }
        "finite" => {
            let (ll, lv) = need("lambda")?;
            let vals = lv
                .split(',')
                .map(|s| num::<f64>(ll, "lambda", s.trim()))
                .collect::<Result<Vec<f64>>>()?;
            if vals.is_empty() || vals.len() > 1 << 20 || vals.iter().any(|v| !v.is_finite()) {
                return Err(perr(ll, "lambda must be a nonempty list of finite numbers"));
            }
            KernelFileKind::Finite(vals)
        }
        _ => KernelFileKind::WienerSheet,
    };
    let params = KernelParams { d, kind };
    params.to_handle().map_err(|e| perr(kl, e.to_string()))?;
    Ok(params)
}

/// Flat experiment configuration: ordered keys with string values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigMap {
    pub entries: BTreeMap<String, String>,
}

impl ConfigMap {
    /// Parses config lines.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = parse_key_values(text)?.into_iter().map(|(_, k, v)| (k, v)).collect();
        Ok(Self { entries })
    }

    /// Applies one `key=value` override, replacing an existing value.
    pub fn set(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv.split_once('=').ok_or_else(|| perr(0, format!("override {kv:?} is not key=value")))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(perr(0, "empty key in override"));
        }
        self.entries.insert(k.to_string(), v.trim().to_string());
        Ok(())
    }

    /// Rejects any key not in `known`.
    pub fn check_known(&self, known: &[&str]) -> Result<()> {
        match self.entries.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidArgument(format!("unknown key {k:?}; known keys: {}", known.join(", ")))),
            None => Ok(()),
        }
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.entries.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::InvalidArgument(format!("bad value for {key}: {v:?}"))),
        }
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        self.parsed(key, default)
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        self.parsed(key, default)
    }

    pub fn u32(&self, key: &str, default: u32) -> Result<u32> {
        self.parsed(key, default)
    }

    pub fn string(&self, key: &str, default: &str) -> String {
        self.entries.get(key).cloned().unwrap_or_else(|| default.to_string())
    }

    /// Comma-separated list.
    pub fn list<T: std::str::FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>> {
        match self.entries.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad list entry for {key}: {s:?}"))))
                .collect(),
        }
    }
}

/// Truth table from a bit string over `{0,1}^d` in lexicographic order with
/// `x_1` most significant. Whitespace is ignored; the length must be `2^d`.
pub fn parse_truth_table(text: &str) -> Result<BooleanTable> {
    let mut bits = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for c in line.chars().filter(|c| !c.is_whitespace()) {
            match c {
                '0' => bits.push(-1i8),
                '1' => bits.push(1i8),
                other => return Err(perr(i + 1, format!("unexpected character {other:?}"))),
            }
            if bits.len() > 1 << MAX_TABLE_DIM {
                return Err(perr(i + 1, "table longer than 2^20 entries"));
            }
        }
    }
    let n = bits.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(perr(text.lines().count().max(1), format!("length {n} is not a power of two")));
    }
    let d = n.trailing_zeros() as usize;
    let mut values = vec![0i8; n];
    for (pos, &b) in bits.iter().enumerate() {
        values[BooleanTable::mask_of_position(d, pos as u64) as usize] = b;
    }
    Ok(BooleanTable { d, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_files() {
        let k = parse_kernel_params("# Korobov\nkind = korobov\nd = 2\nr = 2\nbeta0 = 0.5\nL = 32\n").unwrap();
        assert_eq!(k.kind, KernelFileKind::Korobov { r: 2.0, beta0: 0.5, truncation: 32 });
        assert_eq!(k.to_handle().unwrap().d, 2);
        let k = parse_kernel_params("kind=finite\nd=1\nlambda=0.8, 0.4\n").unwrap();
        assert_eq!(k.kind, KernelFileKind::Finite(vec![0.8, 0.4]));
        assert!(matches!(parse_kernel_params("kind=wiener-sheet\nd=3"), Ok(KernelParams { d: 3, .. })));
    }

    #[test]
    fn kernel_errors_have_lines() {
        let e = parse_kernel_params("kind = korobov\nd = 2\nr = abc\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, msg: "bad value for r: \"abc\"".into() });
        assert!(matches!(parse_kernel_params("kind=korobov\nd=2\nr=2\nfoo=1"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_kernel_params("kind=wiener-sheet\nd=2\nr=2"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_kernel_params("d=2\nd=3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_kernel_params("kind=korobov\nd=2\nr=0.3"), Err(Error::Parse { line: 3, .. })));
        assert!(parse_kernel_params("kind=korobov\nd=2").is_err());
    }

    #[test]
    fn config_and_overrides() {
        let mut c = ConfigMap::parse("n = 4,16,64\nreps=100 # comment\n\n").unwrap();
        c.set("reps=20").unwrap();
        assert_eq!(c.list::<usize>("n", &[]).unwrap(), vec![4, 16, 64]);
        assert_eq!(c.usize("reps", 1).unwrap(), 20);
        assert_eq!(c.f64("missing", 1.5).unwrap(), 1.5);
        assert!(c.check_known(&["n", "reps"]).is_ok());
        assert!(c.check_known(&["n"]).is_err());
        assert!(c.set("novalue").is_err());
        assert!(ConfigMap::parse("a=1\nbroken line").is_err());
    }

    #[test]
    fn truth_tables() {
        let t = parse_truth_table("0001\n0111\n").unwrap();
        assert_eq!(t.d, 3);
        assert_eq!(t.to_bits(), "00010111");
        assert!(t.is_monotone());
        assert!(parse_truth_table("010").is_err());
        assert!(matches!(parse_truth_table("01\n2"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_truth_table("").is_err());
        assert_eq!(parse_truth_table("1").unwrap().d, 0);
    }
}
