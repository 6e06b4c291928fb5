//! JSON debug dump of a symbol.

use serde::Serialize;

use super::GradedSymbol;

#[derive(Clone, Debug, Serialize)]
pub struct SymbolDump {
    pub n: usize,
    pub leading: i32,
    pub parts: Vec<SymbolPartDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolPartDump {
    pub homogeneity: i32,
    pub xi_degree: u32,
    pub inv_norm_power: u32,
    pub terms: Vec<SymbolTermDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolTermDump {
    pub xi: Vec<u32>,
    pub x: Vec<u32>,
    /// `(row, column, value)` over the basis of forms.
    pub entries: Vec<(usize, usize, String)>,
}

impl SymbolDump {
    pub fn of(sym: &GradedSymbol) -> Self {
        let n = sym.n();
        let parts = sym
            .parts()
            .iter()
            .map(|p| SymbolPartDump {
                homogeneity: p.homogeneity(),
                xi_degree: p.xi_degree,
                inv_norm_power: p.inv_norm_power,
                terms: p
                    .coeff
                    .iter()
                    .map(|((xi, x), m)| SymbolTermDump {
                        xi: xi.exponents(n),
                        x: x.exponents(n),
                        entries: m.entries().map(|(r, c, v)| (r, c, v.to_string())).collect(),
                    })
                    .collect(),
            })
            .collect();
        SymbolDump { n, leading: sym.leading(), parts }
    }
}
