"""
End-to-end tests of the command-line surface
"""
import pytest

from main import main


SPEC_TEXT = "\n".join(
    [
        "size=8 class=ascender_and_descender_rich fill=0.9",
        "size=12 class=ascender_rich fill=0.8",
        "size=16 class=ascender_and_descender_rich fill=1",
        "size=20 class=ascender_rich fill=0.7",
        "size=10 class=upper_case fill=0.6",
    ]
) + "\n"

PAGE_ARGS = ["--width", "800", "--height", "600", "--margin", "20", "--gap", "10"]


@pytest.fixture
def synth_page(tmp_path):
    """A generated page and truth written through the synth command"""
    spec = tmp_path / "lines.txt"
    spec.write_text(SPEC_TEXT)
    page = tmp_path / "page.rld"
    truth = tmp_path / "truth.txt"
    code = main(["synth", "--spec", str(spec), "--seed", "3", "--out", str(page), "--truth", str(truth), *PAGE_ARGS])
    assert code == 0
    return page, truth


@pytest.fixture
def models_file(tmp_path, capsys):
    path = tmp_path / "models.txt"
    assert main(["train", "--reference", "--out", str(path)]) == 0
    capsys.readouterr()
    return path


class TestCommands:

    def test_synth_writes_truth(self, synth_page):
        """Test synth writes one truth line per spec line"""
        _, truth = synth_page
        lines = truth.read_text().splitlines()
        assert lines[0] == "# rlfont v1"
        assert len(lines) == 6

    def test_segment(self, synth_page, capsys):
        """Test segment lists the generated lines"""
        page, truth = synth_page
        assert main(["segment", "--in", str(page)]) == 0
        out = capsys.readouterr().out.splitlines()
        expected = [line.split(" size=")[0] for line in truth.read_text().splitlines()[1:]]
        assert [line.split(" height=")[0] for line in out[2:]] == expected

    def test_features(self, synth_page, capsys):
        """Test the feature dump has '-' for the upper-case line"""
        page, _ = synth_page
        assert main(["features", "--in", str(page)]) == 0
        rows = capsys.readouterr().out.splitlines()
        assert rows[1].split("\t") == ["row_range", "h", "b", "a", "d", "m1", "m2", "l", "r", "R", "mhd"]
        assert rows[2].split("\t")[1] == "33"
        assert rows[-1].split("\t")[2:7] == ["-"] * 5

    def test_train_reference(self, models_file):
        """Test reference training writes all models"""
        assert models_file.read_text().count("feature=") == 3

    def test_train_from_pages(self, tmp_path, capsys):
        """Test training from generated pages"""
        spec = tmp_path / "lines.txt"
        spec.write_text("".join(f"size={s} class=ascender_and_descender_rich fill=0.9\n" for s in (8, 12, 16, 20)))
        pages, truths = [], []
        for seed in range(2):
            page, truth = tmp_path / f"p{seed}.rld", tmp_path / f"t{seed}.txt"
            assert main(["synth", "--spec", str(spec), "--seed", str(seed), "--out", str(page), "--truth", str(truth), *PAGE_ARGS]) == 0
            pages.append(str(page))
            truths.append(str(truth))
        out = tmp_path / "models.txt"
        assert main(["train", "--pages", *pages, "--truth", *truths, "--out", str(out)]) == 0
        assert "feature=line_height" in capsys.readouterr().out

    def test_detect_with_truth(self, synth_page, models_file, capsys):
        """Test detect prints the report and a perfect accuracy table"""
        page, truth = synth_page
        assert main(["detect", "--in", str(page), "--models", str(models_file), "--truth", str(truth)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[-2].split() == ["Overall", "4", "4", "100.00"]
        assert out[-1] == "# 1 upper-case lines not scored"
        assert "uppercase_unsupported" in "\n".join(out)

    def test_detect_regions_format(self, synth_page, models_file, capsys):
        """Test the region output format"""
        page, _ = synth_page
        assert main(["detect", "--in", str(page), "--models", str(models_file), "--format", "regions"]) == 0
        rows = capsys.readouterr().out.splitlines()
        assert rows[1].startswith("Text region")
        assert rows[2].split()[2] == "8"

    def test_detect_is_deterministic(self, synth_page, models_file, capsys):
        """Test repeated runs print identical reports"""
        page, _ = synth_page
        main(["detect", "--in", str(page), "--models", str(models_file)])
        first = capsys.readouterr().out
        main(["detect", "--in", str(page), "--models", str(models_file), "--jobs", "2"])
        assert capsys.readouterr().out == first

    def test_bench(self, synth_page, capsys):
        """Test bench reports matching visit and pair counts"""
        page, _ = synth_page
        assert main(["bench", "--in", str(page), "--iters", "2"]) == 0
        out = capsys.readouterr().out
        pairs = next(line for line in out.splitlines() if line.startswith("run pairs")).split()[-1]
        visits = next(line for line in out.splitlines() if line.startswith("run visits")).split()[-1]
        assert pairs == visits

    def test_convert_round_trip(self, tmp_path, data_dir):
        """Test pbm -> rld -> pbm is byte identical"""
        rld = tmp_path / "tiny.rld"
        pbm = tmp_path / "tiny.pbm"
        assert main(["convert", "--in", str(data_dir / "tiny.pbm"), "--out", str(rld)]) == 0
        assert main(["convert", "--in", str(rld), "--out", str(pbm)]) == 0
        assert pbm.read_bytes() == (data_dir / "tiny.pbm").read_bytes()
        assert rld.read_bytes() == (data_dir / "tiny.rld").read_bytes()


class TestExitCodes:

    def test_missing_input(self, tmp_path, capsys):
        """Test a missing document exits 1 with a message on stderr"""
        assert main(["segment", "--in", str(tmp_path / "absent.rld")]) == 1
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "absent.rld" in captured.err

    def test_corrupt_document(self, data_dir, capsys):
        """Test a corrupt row exits 1 naming the row"""
        assert main(["segment", "--in", str(data_dir / "corrupt_row.rld")]) == 1
        assert "row 1" in capsys.readouterr().err

    def test_bad_arguments(self, capsys):
        """Test usage errors exit 1"""
        assert main(["detect", "--sizes", "a,b"]) == 1

    def test_bad_thresholds(self, synth_page, models_file):
        """Test inverted MHD thresholds exit 1"""
        page, _ = synth_page
        args = ["detect", "--in", str(page), "--models", str(models_file), "--mhd-low", "30", "--mhd-high", "10"]
        assert main(args) == 1

    def test_misaligned_truth(self, synth_page, models_file, tmp_path):
        """Test truth that does not line up exits 1"""
        page, _ = synth_page
        truth = tmp_path / "other.txt"
        truth.write_text("line 1: rows=1..5 size=8 class=ascender_rich r=10\n")
        assert main(["detect", "--in", str(page), "--models", str(models_file), "--truth", str(truth)]) == 1

    def test_mismatched_training_inputs(self, synth_page, tmp_path):
        """Test page and truth counts must match"""
        page, truth = synth_page
        args = ["train", "--pages", str(page), str(page), "--truth", str(truth), "--out", str(tmp_path / "m.txt")]
        assert main(args) == 1
