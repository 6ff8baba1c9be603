use tribracket::diagram::PdCode;

/// Unoriented Kauffman state sum read straight off the PD tuples: weight
/// `a` for the smoothing joining `(i,j)` and `(k,l)` (the A-smoothing for
/// counterclockwise tuples), `a⁻¹` for the other, `δ` per loop, then the
/// writhe factor `(-a³)^(-writhe)`. Knots only; edge labels run along the
/// knot.
pub fn kauffman_oracle(pd: &PdCode, a: i64, m: i64) -> i64 {
    let r = |x: i64| x.rem_euclid(m);
    let inv = |x: i64| (1..m).find(|&y| r(x * y) == 1).unwrap();
    let pow = |x: i64, e: i64| {
        let (base, e) = if e < 0 { (inv(x), -e) } else { (x, e) };
        (0..e).fold(1, |acc, _| r(acc * base))
    };
    let delta = r(-a * a - inv(a) * inv(a));
    let xs = pd.crossings();
    if xs.is_empty() {
        return r(pow(delta, pd.crossingless_loops() as i64));
    }
    let edges = 2 * xs.len() as i64;
    let writhe: i64 = xs
        .iter()
        .map(|&[_, j, _, l]| {
            let (j, l) = (j as i64, l as i64);
            if r(j - l - 1 + edges) % edges == 0 || (l - j) > 1 {
                1
            } else {
                -1
            }
        })
        .sum();
    let mut total = 0;
    for state in 0..1u64 << xs.len() {
        let mut parent: Vec<usize> = (0..=edges as usize).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut weight = 1;
        for (c, &[i, j, k, l]) in xs.iter().enumerate() {
            let pairs = if state >> c & 1 == 0 {
                weight = r(weight * a);
                [(i, j), (k, l)]
            } else {
                weight = r(weight * inv(a));
                [(i, l), (j, k)]
            };
            for (p, q) in pairs {
                let (rp, rq) = (find(&mut parent, p as usize), find(&mut parent, q as usize));
                parent[rp] = rq;
            }
        }
        let loops = (1..=edges as usize)
            .filter(|&e| find(&mut parent, e) == e)
            .count() as i64;
        total = r(total + weight * pow(delta, loops));
    }
    r(total * pow(r(-a * a * a), -writhe))
}
