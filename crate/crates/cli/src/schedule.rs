//! Number lists for `--schedule`, `--taus` and friends.
//!
//! * `linear:a:b:k` gives `k` evenly spaced values from `a` to `b` inclusive.
//! * `geometric:a:ratio:k` gives `a, a·ratio, …, a·ratio^{k−1}`.
//! * `pow2tower:n` gives `2^{2^i}` and `2^{2^i} + 1` for `i = 1..=n`.
//! * anything else is read as a comma separated list.

pub fn parse(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts[0] {
        "linear" => {
            let [a, b, k] = fields::<3>(&parts, "linear:a:b:k")?;
            let k = count(k)?;
            if k == 1 {
                vec![a]
            } else {
                (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect()
            }
        }
        "geometric" => {
            let [a, r, k] = fields::<3>(&parts, "geometric:a:ratio:k")?;
            let mut out = Vec::new();
            let mut x = a;
            for _ in 0..count(k)? {
                out.push(x);
                x *= r;
            }
            out
        }
        "pow2tower" => {
            let [n] = fields::<1>(&parts, "pow2tower:n")?;
            let n = count(n)?;
            if n > 9 {
                return Err("pow2tower supports n <= 9".into());
            }
            (1..=n as i32)
                .flat_map(|i| {
                    let t = 2f64.powi(1 << i);
                    [t, t + 1.0]
                })
                .collect()
        }
        _ if parts.len() == 1 => spec
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad number `{s}`")))
            .collect::<Result<_, _>>()?,
        other => return Err(format!("unknown schedule kind `{other}`")),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(format!("schedule `{spec}` produced a non-finite value"));
    }
    Ok(values)
}

fn fields<const N: usize>(parts: &[&str], usage: &str) -> Result<[f64; N], String> {
    if parts.len() != N + 1 {
        return Err(format!("expected {usage}"));
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(&parts[1..]) {
        *slot = p.trim().parse().map_err(|_| format!("bad number `{p}` in {usage}"))?;
    }
    Ok(out)
}

fn count(k: f64) -> Result<usize, String> {
    if k >= 1.0 && k.fract() == 0.0 && k <= 1e8 {
        Ok(k as usize)
    } else {
        Err(format!("count must be a positive integer, got {k}"))
    }
}

/// `a:b` pairs such as windows and cell ranges.
pub fn pair(spec: &str) -> Result<(f64, f64), String> {
    let (a, b) = spec.split_once(':').ok_or_else(|| format!("expected a:b, got `{spec}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad number `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad number `{b}`"))?;
    Ok((a, b))
}
