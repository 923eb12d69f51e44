//! Small finite groups and monoids given by multiplication tables.
//!
//! `table[a][b]` is the index of the product `a·b`.

use crate::error::{Error, Result};

pub type Table = Vec<Vec<usize>>;

pub fn cyclic(n: usize) -> Table {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// Direct product; element `(a, b)` has index `a·|H| + b`.
pub fn direct_product(g: &Table, h: &Table) -> Table {
    let (m, n) = (g.len(), h.len());
    (0..m * n)
        .map(|x| (0..m * n).map(|y| g[x / n][y / n] * n + h[x % n][y % n]).collect())
        .collect()
}

/// Permutations of {0,1,2} in the order e, (12), (13), (23), (123), (132),
/// composed right-to-left: `(σ·τ)(x) = σ(τ(x))`.
pub const S3_LABELS: [&str; 6] = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];

pub fn s3_permutations() -> [[usize; 3]; 6] {
    [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]]
}

pub fn symmetric3() -> Table {
    let perms = s3_permutations();
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed under composition");
    (0..6)
        .map(|a| {
            (0..6)
                .map(|b| {
                    let (s, t) = (perms[a], perms[b]);
                    index([s[t[0]], s[t[1]], s[t[2]]])
                })
                .collect()
        })
        .collect()
}

pub fn validate_square(table: &Table) -> Result<usize> {
    let n = table.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty multiplication table".into()));
    }
    for row in table {
        if row.len() != n || row.iter().any(|&x| x >= n) {
            return Err(Error::InvalidInput("multiplication table must be square with entries < n".into()));
        }
    }
    Ok(n)
}

pub fn check_associative(table: &Table) -> Result<()> {
    let n = validate_square(table)?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::NotAssociative(a, b, c));
                }
            }
        }
    }
    Ok(())
}

pub fn is_identity(table: &Table, e: usize) -> bool {
    (0..table.len()).all(|a| table[e][a] == a && table[a][e] == a)
}

pub fn find_identity(table: &Table) -> Option<usize> {
    (0..table.len()).find(|&e| is_identity(table, e))
}

/// Inverse map of a group table, or `NotAGroup`.
pub fn inverses(table: &Table) -> Result<Vec<usize>> {
    validate_square(table).map_err(|e| Error::NotAGroup(e.to_string()))?;
    check_associative(table).map_err(|e| Error::NotAGroup(e.to_string()))?;
    let e = find_identity(table).ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
    (0..table.len())
        .map(|a| {
            (0..table.len())
                .find(|&b| table[a][b] == e && table[b][a] == e)
                .ok_or_else(|| Error::NotAGroup(format!("element {a} has no inverse")))
        })
        .collect()
}

/// Checks closure of `subset` under the table.
pub fn is_subgroup(table: &Table, subset: &[usize]) -> bool {
    let e = match find_identity(table) {
        Some(e) => e,
        None => return false,
    };
    subset.contains(&e) && subset.iter().all(|&a| subset.iter().all(|&b| subset.contains(&table[a][b])))
}

/// Multiplication table of a subgroup, reindexed in the order of `subset`.
pub fn subgroup_table(table: &Table, subset: &[usize]) -> Result<Table> {
    if !is_subgroup(table, subset) {
        return Err(Error::NotAGroup("subset is not a subgroup".into()));
    }
    let pos = |x: usize| subset.iter().position(|&s| s == x).expect("closed");
    Ok(subset.iter().map(|&a| subset.iter().map(|&b| pos(table[a][b])).collect()).collect())
}

/// Double cosets `H g H`, each sorted, listed by smallest representative.
pub fn double_cosets(table: &Table, subgroup: &[usize]) -> Vec<Vec<usize>> {
    let n = table.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for g in 0..n {
        if seen[g] {
            continue;
        }
        let mut coset: Vec<usize> = subgroup
            .iter()
            .flat_map(|&h| subgroup.iter().map(move |&k| (h, k)))
            .map(|(h, k)| table[table[h][g]][k])
            .collect();
        coset.sort_unstable();
        coset.dedup();
        for &x in &coset {
            seen[x] = true;
        }
        out.push(coset);
    }
    out
}
