use pyo3::prelude::*;

#[pymodule]
fn ecd_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
