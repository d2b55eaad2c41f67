//! Small named groups used by tests, reports, and the CLI.

use super::{FiniteGroup, DEFAULT_MAX_ORDER};

/// Cyclic group `Z_n` with elements `0..n` under addition.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n > 0, "cyclic group of order 0");
    let flat = (0..n)
        .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
        .collect();
    FiniteGroup::from_flat(n, flat, false).expect("Z_n is a group")
}

/// `Z_2 x Z_2`.
pub fn klein() -> FiniteGroup {
    cyclic(2).direct_product(&cyclic(2))
}

/// Quaternion group with elements labelled `1, -1, i, -i, j, -j, k, -k` (indices 0..8).
pub fn quaternion() -> FiniteGroup {
    // Element 2*u + s is (-1)^s * unit[u] with unit = [1, i, j, k].
    // UNIT[u][v] = (sign, unit) of unit[u]*unit[v].
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut flat = Vec::with_capacity(64);
    for a in 0..8 {
        for b in 0..8 {
            let (s, u) = UNIT[a / 2][b / 2];
            let sign = (a % 2 + b % 2 + s) % 2;
            flat.push((2 * u + sign) as u32);
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .map(String::from)
        .to_vec();
    FiniteGroup::from_flat(8, flat, false)
        .and_then(|g| g.with_labels(labels))
        .expect("Q8 is a group")
}

/// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 3, "dihedral group needs n >= 3");
    let rotation: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
    let reflection: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
    FiniteGroup::from_permutations(&[rotation, reflection], n, DEFAULT_MAX_ORDER)
        .expect("dihedral group is small")
        .0
}

/// Symmetric group on `n` points.
pub fn symmetric(n: usize) -> FiniteGroup {
    assert!((1..=7).contains(&n), "symmetric group degree out of range");
    if n == 1 {
        return cyclic(1);
    }
    let cycle: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    FiniteGroup::from_permutations(&[cycle, swap], n, DEFAULT_MAX_ORDER)
        .expect("S_n is small")
        .0
}

/// Alternating group on `n >= 3` points.
pub fn alternating(n: usize) -> FiniteGroup {
    assert!(
        (3..=7).contains(&n),
        "alternating group degree out of range"
    );
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|k| {
            let mut p: Vec<usize> = (0..n).collect();
            // 3-cycle (0 1 k)
            p[0] = 1;
            p[1] = k;
            p[k] = 0;
            p
        })
        .collect();
    FiniteGroup::from_permutations(&gens, n, DEFAULT_MAX_ORDER)
        .expect("A_n is small")
        .0
}

/// Looks up a catalog group by name: `Z<n>`, `V4`, `Q8`, `D<n>`, `S<n>`, `A<n>`.
pub fn by_name(name: &str) -> Option<FiniteGroup> {
    let (head, tail) = name.split_at(1.min(name.len()));
    let n = tail.parse::<usize>().ok();
    match (head, n, name) {
        (_, _, "V4") => Some(klein()),
        (_, _, "Q8") => Some(quaternion()),
        ("Z", Some(n), _) if n >= 1 => Some(cyclic(n)),
        ("D", Some(n), _) if n >= 3 => Some(dihedral(n)),
        ("S", Some(n), _) if (1..=7).contains(&n) => Some(symmetric(n)),
        ("A", Some(n), _) if (3..=7).contains(&n) => Some(alternating(n)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hamilton product on integer quaternions (a + bi + cj + dk).
    fn hamilton(p: [i32; 4], q: [i32; 4]) -> [i32; 4] {
        let [a1, b1, c1, d1] = p;
        let [a2, b2, c2, d2] = q;
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ]
    }

    fn unit(label: &str) -> [i32; 4] {
        match label {
            "1" => [1, 0, 0, 0],
            "-1" => [-1, 0, 0, 0],
            "i" => [0, 1, 0, 0],
            "-i" => [0, -1, 0, 0],
            "j" => [0, 0, 1, 0],
            "-j" => [0, 0, -1, 0],
            "k" => [0, 0, 0, 1],
            "-k" => [0, 0, 0, -1],
            _ => unreachable!(),
        }
    }

    #[test]
    fn quaternion_table_matches_hamilton_product() {
        let q8 = quaternion();
        let labels = q8.labels().unwrap().to_vec();
        for a in 0..8 {
            for b in 0..8 {
                let expected = hamilton(unit(&labels[a]), unit(&labels[b]));
                assert_eq!(
                    unit(&labels[q8.mul(a, b)]),
                    expected,
                    "{} * {}",
                    labels[a],
                    labels[b]
                );
            }
        }
        assert_eq!(q8.center().len(), 2);
        assert_eq!(q8.identity(), 0);
    }

    #[test]
    fn catalog_orders() {
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating(4).order(), 12);
        assert_eq!(klein().order(), 4);
        assert!(!dihedral(4).is_abelian());
        assert_eq!(by_name("Z6").unwrap().order(), 6);
        assert!(by_name("X3").is_none());
    }
}
