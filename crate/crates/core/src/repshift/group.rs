use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unknown group name {0:?}; try Z<n> (n <= 64) or S<k> (k <= 5)")]
    UnknownName(String),
    #[error("group table: {0}")]
    BadTable(String),
}

/// A finite group given by its multiplication table. Element 0 is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    powers: Vec<Vec<usize>>,
}

impl FiniteGroup {
    fn from_parts(name: String, elements: Vec<String>, table: Vec<Vec<usize>>) -> FiniteGroup {
        let n = elements.len();
        let inverse = (0..n).map(|g| (0..n).find(|&h| table[g][h] == 0).expect("inverse exists")).collect();
        let powers = (0..n)
            .map(|g| {
                let mut ps = vec![0];
                let mut x = g;
                while x != 0 {
                    ps.push(x);
                    x = table[x][g];
                }
                ps
            })
            .collect();
        FiniteGroup { name, elements, table, inverse, powers }
    }

    pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
        if !(1..=64).contains(&n) {
            return Err(GroupError::UnknownName(format!("Z{n}")));
        }
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Ok(FiniteGroup::from_parts(format!("Z{n}"), (0..n).map(|i| i.to_string()).collect(), table))
    }

    /// Permutations of `1..=k` in lexicographic order of their images,
    /// composed right to left and named in cycle notation.
    pub fn symmetric(k: usize) -> Result<FiniteGroup, GroupError> {
        if !(1..=5).contains(&k) {
            return Err(GroupError::UnknownName(format!("S{k}")));
        }
        let mut perms = Vec::new();
        permutations(&mut (0..k).collect(), 0, &mut perms);
        perms.sort();
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| index(&t.iter().map(|&x| s[x]).collect())).collect())
            .collect();
        let names = perms.iter().map(|p| cycle_notation(p)).collect();
        Ok(FiniteGroup::from_parts(format!("S{k}"), names, table))
    }

    /// `Z<n>`, `S<k>`, `cyclic(n)` or `symmetric(k)`.
    pub fn by_name(name: &str) -> Result<FiniteGroup, GroupError> {
        let unknown = || GroupError::UnknownName(name.to_string());
        let lower = name.trim().to_ascii_lowercase();
        let (kind, arg) = if let Some(rest) = lower.strip_prefix("cyclic(") {
            ('z', rest.strip_suffix(')').ok_or_else(unknown)?)
        } else if let Some(rest) = lower.strip_prefix("symmetric(") {
            ('s', rest.strip_suffix(')').ok_or_else(unknown)?)
        } else if let Some(rest) = lower.strip_prefix('z') {
            ('z', rest)
        } else if let Some(rest) = lower.strip_prefix('s') {
            ('s', rest)
        } else {
            return Err(unknown());
        };
        let n: usize = arg.parse().map_err(|_| unknown())?;
        match kind {
            'z' => FiniteGroup::cyclic(n).map_err(|_| unknown()),
            _ => FiniteGroup::symmetric(n).map_err(|_| unknown()),
        }
    }

    /// First line the order `n`, then `n` rows of `n` indices giving
    /// `g_i g_j`. Element 0 must be the identity.
    pub fn from_table_text(name: &str, text: &str) -> Result<FiniteGroup, GroupError> {
        let bad = |m: String| GroupError::BadTable(m);
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| bad("empty file".into()))?
            .parse()
            .map_err(|_| bad("first line must be the group order".into()))?;
        if n == 0 || n > 1000 {
            return Err(bad(format!("order {n} out of range 1..=1000")));
        }
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| bad(format!("missing row {i}")))?;
            let row: Vec<usize> = line
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| bad(format!("row {i}: {x:?} is not an index"))))
                .collect::<Result<_, _>>()?;
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(bad(format!("row {i} must have {n} indices below {n}")));
            }
            table.push(row);
        }
        if lines.next().is_some() {
            return Err(bad("trailing lines after the table".into()));
        }
        for i in 0..n {
            if table[0][i] != i || table[i][0] != i {
                return Err(bad("element 0 is not the identity".into()));
            }
            let mut row = table[i].clone();
            let mut col: Vec<usize> = (0..n).map(|j| table[j][i]).collect();
            row.sort_unstable();
            col.sort_unstable();
            if row != (0..n).collect::<Vec<_>>() || col != row {
                return Err(bad(format!("row or column {i} is not a permutation")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup::from_parts(name.to_string(), (0..n).map(|i| format!("g{i}")).collect(), table))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_name(&self, g: usize) -> &str {
        &self.elements[g]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let ps = &self.powers[a];
        ps[e.rem_euclid(ps.len() as i64) as usize]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.powers[a].len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// The same group with elements reordered by `perm` (old index to new),
    /// which must fix the identity.
    pub fn relabel(&self, perm: &[usize]) -> FiniteGroup {
        let n = self.order();
        let mut elements = vec![String::new(); n];
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            elements[perm[a]] = self.elements[a].clone();
            for b in 0..n {
                table[perm[a]][perm[b]] = perm[self.table[a][b]];
            }
        }
        FiniteGroup::from_parts(self.name.clone(), elements, table)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "id".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_groups() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.element_name(0), "id");
        let t = s3.element("(12)").unwrap();
        let c = s3.element("(123)").unwrap();
        assert_eq!(s3.mul(t, t), 0);
        assert_eq!(s3.pow(c, 3), 0);
        assert_eq!(s3.inv(c), s3.element("(132)").unwrap());
        assert_eq!(s3.pow(c, -1), s3.inv(c));
        assert!(!s3.is_abelian());
        assert_eq!(s3.element_name(s3.mul(t, s3.element("(23)").unwrap())), "(123)");
        assert_eq!(FiniteGroup::symmetric(5).unwrap().order(), 120);
        assert!(FiniteGroup::symmetric(6).is_err());
    }

    #[test]
    fn associativity_spot_check() {
        for g in [FiniteGroup::symmetric(4).unwrap(), FiniteGroup::cyclic(12).unwrap()] {
            let n = g.order();
            for a in (0..n).step_by(3) {
                for b in (0..n).step_by(2) {
                    for c in 0..n {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn names() {
        assert_eq!(FiniteGroup::by_name("Z5").unwrap(), FiniteGroup::cyclic(5).unwrap());
        assert_eq!(FiniteGroup::by_name("cyclic(3)").unwrap().order(), 3);
        assert_eq!(FiniteGroup::by_name("S3").unwrap().order(), 6);
        assert_eq!(FiniteGroup::by_name("symmetric(4)").unwrap().order(), 24);
        for bad in ["Z0", "Z65", "S6", "Q8", "Zx"] {
            assert!(FiniteGroup::by_name(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn table_files() {
        let g = FiniteGroup::from_table_text("K4", "4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n").unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.element_order(3), 2);
        assert!(FiniteGroup::from_table_text("x", "2\n0 1\n1 1\n").is_err());
        assert!(FiniteGroup::from_table_text("x", "2\n1 0\n0 1\n").is_err());
        assert!(FiniteGroup::from_table_text("x", "3\n0 1 2\n1 2 0\n").is_err());
        // Latin square that is not associative.
        let loop5 = "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n";
        assert!(matches!(FiniteGroup::from_table_text("x", loop5), Err(GroupError::BadTable(m)) if m.contains("associative")));
    }
}
