use chevalley::polyring::matrix::PolyMatrix;

pub fn matrix_json(m: &PolyMatrix) -> Vec<Vec<String>> {
    m.iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect()
}

/// Right-aligned columns.
pub fn print_matrix(m: &PolyMatrix) {
    let cells = matrix_json(m);
    let cols = cells.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols).map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
        println!("[ {} ]", line.join("  "));
    }
}
