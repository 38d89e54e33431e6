//! Reference corpus shapes used as scale targets for the synthetic generator.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetShape {
    pub name: &'static str,
    pub nodes: usize,
    pub edges: usize,
    pub topics: usize,
    pub seeds: usize,
}

pub const DATASET_SHAPES: [DatasetShape; 6] = [
    DatasetShape {
        name: "I",
        nodes: 1331,
        edges: 8737,
        topics: 1,
        seeds: 20,
    },
    DatasetShape {
        name: "II",
        nodes: 1109,
        edges: 7723,
        topics: 1,
        seeds: 23,
    },
    DatasetShape {
        name: "III",
        nodes: 1801,
        edges: 8493,
        topics: 1,
        seeds: 27,
    },
    DatasetShape {
        name: "IV",
        nodes: 2351,
        edges: 14739,
        topics: 2,
        seeds: 41,
    },
    DatasetShape {
        name: "V",
        nodes: 2817,
        edges: 13283,
        topics: 2,
        seeds: 45,
    },
    DatasetShape {
        name: "VI",
        nodes: 4028,
        edges: 23151,
        topics: 3,
        seeds: 69,
    },
];

/// Looks a shape up by roman numeral (`"IV"`) or 1-based index (`"4"`).
pub fn dataset_shape(name: &str) -> Option<DatasetShape> {
    if let Ok(i) = name.parse::<usize>() {
        return i
            .checked_sub(1)
            .and_then(|i| DATASET_SHAPES.get(i))
            .copied();
    }
    DATASET_SHAPES
        .iter()
        .find(|s| s.name.eq_ignore_ascii_case(name))
        .copied()
}
