//! Deterministic display names for candidates loaded without a `name` column.

const FIRST: [&str; 48] = [
    "Ada", "Bruno", "Carmen", "Dmitri", "Elena", "Farid", "Grace", "Hiro", "Imani", "Jonas",
    "Keiko", "Luis", "Maya", "Nikhil", "Olga", "Pablo", "Quinn", "Rosa", "Samir", "Tara",
    "Umar", "Vera", "Wen", "Ximena", "Yusuf", "Zora", "Amara", "Bjorn", "Chloe", "Dario",
    "Esther", "Felix", "Gita", "Hector", "Ines", "Jamal", "Kira", "Leon", "Mei", "Nadia",
    "Omar", "Priya", "Rafael", "Sofia", "Tomas", "Uma", "Victor", "Yara",
];

const LAST: [&str; 40] = [
    "Abara", "Becker", "Castillo", "Dubois", "Eriksen", "Fontaine", "Garcia", "Hoang", "Ivanova",
    "Jensen", "Kowalski", "Lindqvist", "Moreau", "Nakamura", "Okafor", "Petrov", "Quispe",
    "Rossi", "Santos", "Tanaka", "Usman", "Varga", "Walsh", "Xu", "Yilmaz", "Zeller", "Adeyemi",
    "Bauer", "Chen", "Delgado", "Esposito", "Fischer", "Gupta", "Haddad", "Iyer", "Jovanovic",
    "Kim", "Lopez", "Mensah", "Novak",
];

/// Name for the candidate on data row `index` (0-based). Distinct for the
/// first `FIRST.len() * LAST.len()` rows.
pub fn generated_name(index: usize) -> String {
    let first = FIRST[index % FIRST.len()];
    let last = LAST[(index + index / FIRST.len()) % LAST.len()];
    format!("{first} {last}")
}
