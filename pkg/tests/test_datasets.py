import numpy as np
import pytest

from mdsbiplot.datasets import ingest_csv, load_sample


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestIngestCsv:
    def test_basic_with_header(self, tmp_path):
        path = write(tmp_path, "a,b\n1,2\n3,4\n5,6\n")
        ds = ingest_csv(path)
        assert ds.names == ("a", "b")
        assert ds.ids == ("1", "2", "3")
        assert ds.X.shape == (3, 2)
        assert np.array_equal(ds.X, [[1, 2], [3, 4], [5, 6]])

    def test_id_column_extracted(self, tmp_path):
        path = write(tmp_path, "name,a,b\nfoo,1,2\nbar,3,4\n")
        ds = ingest_csv(path, id_column="name")
        assert ds.ids == ("foo", "bar")
        assert ds.names == ("a", "b")
        assert ds.X.shape == (2, 2)

    def test_no_header(self, tmp_path):
        path = write(tmp_path, "1,2\n3,4\n")
        ds = ingest_csv(path, has_header=False)
        assert ds.names == ("x1", "x2")
        assert ds.X.shape == (2, 2)

    def test_non_numeric_cell_cites_position(self, tmp_path):
        path = write(tmp_path, "a,b\n1,2\n2,3\n9,abc\n")
        with pytest.raises(ValueError, match=r"'abc' at row 4, column 2"):
            ingest_csv(path)

    def test_ragged_row(self, tmp_path):
        path = write(tmp_path, "a,b\n1,2\n3\n")
        with pytest.raises(ValueError, match="ragged row at line 3"):
            ingest_csv(path)

    def test_duplicate_ids(self, tmp_path):
        path = write(tmp_path, "name,a\nx,1\nx,2\n")
        with pytest.raises(ValueError, match="duplicate id 'x'"):
            ingest_csv(path, id_column="name")

    def test_missing_id_column(self, tmp_path):
        path = write(tmp_path, "a,b\n1,2\n")
        with pytest.raises(ValueError, match="id column 'name'"):
            ingest_csv(path, id_column="name")

    def test_duplicate_column_names(self, tmp_path):
        path = write(tmp_path, "a,a\n1,2\n")
        with pytest.raises(ValueError, match="duplicate column name 'a'"):
            ingest_csv(path)

    def test_empty_cell_rejected(self, tmp_path):
        path = write(tmp_path, "a,b\n1,\n")
        with pytest.raises(ValueError, match="row 2, column 2"):
            ingest_csv(path)

    def test_row_order_preserved(self, tmp_path):
        path = write(tmp_path, "a\n9\n1\n5\n")
        ds = ingest_csv(path)
        assert list(ds.X.ravel()) == [9.0, 1.0, 5.0]


class TestSample:
    def test_shape_and_schema(self):
        ds = load_sample()
        assert ds.X.shape == (15, 8)
        assert ds.names == (
            "Stud/Fac", "Enroll", "GradStud", "ACT", "Admit", "GradRate", "Male", "AvgCost",
        )
        assert len(set(ds.ids)) == 15
        assert np.all(np.isfinite(ds.X))
