use mulgroup::arith::PlaceSet;
use mulgroup::gcdlab::GcdInstance;
use num_bigint::BigInt;

/// One parsed line of an instance file.
#[derive(Debug, Clone)]
pub struct Line {
    pub number: usize,
    pub inst: GcdInstance,
}

/// `a1 b1 a2 b2 s1 t1 s2 t2 | p1 p2 ...`, `#` starts a comment. Bad lines
/// are returned as `(line number, message)` and do not stop the parse.
pub fn parse(text: &str) -> (Vec<Line>, Vec<(usize, String)>) {
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match parse_line(body) {
            Ok(inst) => good.push(Line { number, inst }),
            Err(msg) => bad.push((number, msg)),
        }
    }
    (good, bad)
}

fn parse_line(body: &str) -> Result<GcdInstance, String> {
    let (nums, primes) = body.split_once('|').ok_or("missing '|' before the primes of S")?;
    let nums: Vec<BigInt> = nums
        .split_whitespace()
        .map(|t| t.parse::<BigInt>().map_err(|_| format!("not an integer: {t:?}")))
        .collect::<Result<_, _>>()?;
    let nums: [BigInt; 8] = nums.try_into().map_err(|v: Vec<BigInt>| format!("expected 8 integers, got {}", v.len()))?;
    let primes: Vec<u64> = primes
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| format!("not a prime: {t:?}")))
        .collect::<Result<_, _>>()?;
    let places = PlaceSet::new(&primes).map_err(|e| e.to_string())?;
    let [a1, b1, a2, b2, s1, t1, s2, t2] = nums;
    let inst = GcdInstance::new([a1, b1, a2, b2], [s1, t1, s2, t2], places);
    inst.validate().map_err(|e| e.to_string())?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_and_errors() {
        let text = "# header\n1 1 1 1 2 1 3 1 | 2 3\n\n1 1 1 | 2\n1 1 1 1 16 1 81 1 | 2 3 # gcd 5\n1 1 1 1 2 1 3 1 | 4\n1 1 1 1 2 2 3 1 | 2 3\n";
        let (good, bad) = parse(text);
        assert_eq!(good.iter().map(|l| l.number).collect::<Vec<_>>(), vec![2, 5]);
        assert_eq!(good[1].inst.qgcd(), BigInt::from(5));
        assert_eq!(bad.iter().map(|b| b.0).collect::<Vec<_>>(), vec![4, 6, 7]);
    }
}
