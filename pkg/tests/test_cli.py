import json
import subprocess
import sys

import pytest

from sentimin import synthetic
from sentimin.cli import main, parse_config_text
from sentimin.errors import ConfigError


@pytest.fixture
def fixture_corpus(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text(synthetic.bundled_path().read_text("utf-8"), encoding="utf-8")
    return path


@pytest.fixture
def toy_model(tmp_path, write_jsonl):
    corpus = write_jsonl("toy.jsonl", [{"id": "1", "text": "baik", "label": "positive"},
                                       {"id": "2", "text": "ribet", "label": "negative"}])
    model = tmp_path / "toy-model.json"
    assert main(["train", str(corpus), "--output", str(model)]) == 0
    return model


def read_jsonl(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


class TestIngest:
    def test_happy_path(self, tmp_path, write_jsonl, capsys):
        dump = write_jsonl("dump.jsonl", [
            {"id": "1", "text": "Belanja di #Bukalapak mantap"},
            {"id": "2", "text": "cuaca cerah hari ini"},
            {"id": "3", "text": "belanja di #bukalapak   MANTAP"},
            {"id": "4", "text": "@tokopediacare pesanan belum sampai"},
            {"id": "5"},
        ])
        out = tmp_path / "corpus.jsonl"
        report = tmp_path / "report.json"
        code = main(["ingest", str(dump), "-k", "bukalapak,tokopedia", "--output", str(out),
                     "--report", str(report)])
        assert code == 0
        assert json.loads(report.read_text()) == {
            "read": 5, "kept": 2, "malformed": 1, "malformed_lines": [f"{dump}:5"],
            "duplicates_removed": 1, "filtered_out": 1,
        }
        rows = read_jsonl(out)
        assert [(r["id"], r["matched_keyword"]) for r in rows] == [("1", "bukalapak"), ("4", "tokopedia")]

    def test_missing_file(self, tmp_path, capsys):
        missing = tmp_path / "absent.jsonl"
        code = main(["ingest", str(missing), "-k", "x", "--output", str(tmp_path / "o.jsonl")])
        assert code == 2
        assert str(missing) in capsys.readouterr().err

    def test_zero_keywords(self, tmp_path, write_jsonl):
        dump = write_jsonl("d.jsonl", [{"id": "1", "text": "a"}])
        assert main(["ingest", str(dump), "--output", str(tmp_path / "o.jsonl")]) == 3
        assert main(["ingest", str(dump), "-k", " , ", "--output", str(tmp_path / "o.jsonl")]) == 3


class TestEvaluate:
    def test_bundled_corpus(self, fixture_corpus, tmp_path, capsys):
        out = tmp_path / "eval.json"
        assert main(["evaluate", str(fixture_corpus), "--output", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["k"] == 10 and report["n_documents"] == 200
        assert sum(report["aggregate_matrix"].values()) == 200
        assert len(report["folds"]) == 10
        assert "Pred. Positive" in capsys.readouterr().out

    def test_byte_identical(self, fixture_corpus, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["evaluate", str(fixture_corpus), "--seed", "3", "--output", str(a)])
        main(["evaluate", str(fixture_corpus), "--seed", "3", "--output", str(b), "--jobs", "2"])
        assert a.read_bytes() == b.read_bytes()

    def test_k_must_be_at_least_two(self, fixture_corpus):
        assert main(["evaluate", str(fixture_corpus), "--k", "1"]) == 3

    def test_too_few_documents_per_class(self, write_jsonl):
        corpus = write_jsonl("c.jsonl", [{"id": str(i), "text": "baik", "label": "positive"}
                                         for i in range(3)] +
                             [{"id": "n", "text": "ribet", "label": "negative"}])
        assert main(["evaluate", str(corpus), "--k", "2"]) == 4

    def test_labels_csv_and_trace(self, write_jsonl, tmp_path):
        corpus = write_jsonl("c.jsonl", [{"id": f"p{i}", "text": f"baik {i}"} for i in range(4)] +
                             [{"id": f"n{i}", "text": f"Ribet!! {i}"} for i in range(4)])
        labels = tmp_path / "labels.csv"
        labels.write_text("id,label\n" + "".join(f"p{i},positive\nn{i},negative\n" for i in range(4)))
        trace = tmp_path / "trace.jsonl"
        out = tmp_path / "e.json"
        assert main(["evaluate", str(corpus), "--labels", str(labels), "--k", "2",
                     "--trace", str(trace), "--output", str(out)]) == 0
        rows = read_jsonl(trace)
        assert len(rows) == 8
        assert rows[4]["strip_punctuation"] == "ribet 0" and rows[4]["tokens"] == ["ribet"]


class TestTrain:
    def test_round_trip(self, fixture_corpus, tmp_path):
        model = tmp_path / "m.json"
        assert main(["train", str(fixture_corpus), "--output", str(model)]) == 0
        assert main(["classify", str(model), str(fixture_corpus), "--output",
                     str(tmp_path / "p1.jsonl")]) == 0
        copy = tmp_path / "copy.json"
        copy.write_text(model.read_text())
        main(["classify", str(copy), str(fixture_corpus), "--output", str(tmp_path / "p2.jsonl")])
        assert (tmp_path / "p1.jsonl").read_bytes() == (tmp_path / "p2.jsonl").read_bytes()
        doc = json.loads(model.read_text())
        assert doc["preprocessing"]["stem_enabled"] is True

    def test_byte_identical(self, fixture_corpus, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["train", str(fixture_corpus), "--output", str(a)])
        main(["train", str(fixture_corpus), "--output", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_single_class(self, write_jsonl, tmp_path):
        corpus = write_jsonl("c.jsonl", [{"id": "1", "text": "baik", "label": "positive"}])
        assert main(["train", str(corpus), "--output", str(tmp_path / "m.json")]) == 4

    def test_alpha_zero(self, fixture_corpus, tmp_path):
        assert main(["train", str(fixture_corpus), "--alpha", "0", "--output", str(tmp_path / "m")]) == 3
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha = 0\n")
        assert main(["train", str(fixture_corpus), "--config", str(cfg),
                     "--output", str(tmp_path / "m")]) == 3


class TestClassify:
    def test_empty_input(self, toy_model, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        out = tmp_path / "preds.jsonl"
        assert main(["classify", str(toy_model), str(empty), "--output", str(out)]) == 0
        assert out.read_text() == ""

    def test_toy_model(self, toy_model, tmp_path, write_jsonl):
        docs = write_jsonl("docs.jsonl", [{"id": "a", "text": "baik", "brand": "Tokopedia"},
                                          {"id": "b", "text": "ribet"}])
        out = tmp_path / "preds.jsonl"
        assert main(["classify", str(toy_model), str(docs), "--output", str(out)]) == 0
        rows = read_jsonl(out)
        assert [r["id"] for r in rows] == ["a", "b"]
        assert rows[0]["label"] == "positive" and rows[0]["brand"] == "Tokopedia"
        assert rows[0]["posterior"] == pytest.approx(2 / 3, rel=1e-12)
        assert rows[1]["label"] == "negative" and rows[1]["brand"] is None

    @pytest.mark.parametrize("content", ["{ not json", '{"format": "sentimin-nb/1"}', "[]"])
    def test_corrupted_model(self, content, tmp_path, write_jsonl, capsys):
        model = tmp_path / "bad.json"
        model.write_text(content)
        docs = write_jsonl("docs.jsonl", [{"id": "a", "text": "baik"}])
        assert main(["classify", str(model), str(docs), "--output", str(tmp_path / "o")]) == 2
        assert "bad.json" in capsys.readouterr().err


class TestCompare:
    def _write_preds(self, write_jsonl, name, brand, pos, neg):
        rows = [{"id": f"{brand}{i}", "brand": brand, "label": "positive", "posterior": 0.9}
                for i in range(pos)]
        rows += [{"id": f"{brand}n{i}", "brand": brand, "label": "negative", "posterior": 0.8}
                 for i in range(neg)]
        return write_jsonl(name, rows)

    def test_paper_ranking(self, write_jsonl, tmp_path, capsys):
        files = [self._write_preds(write_jsonl, f"{b}.jsonl", b, p, n) for b, p, n in
                 [("Bukalapak", 348, 410), ("Tokopedia", 350, 408), ("Elevenia", 163, 189)]]
        out = tmp_path / "cmp.json"
        assert main(["compare", *map(str, files), "--output", str(out)]) == 0
        data = json.loads(out.read_text())
        assert [d["brand"] for d in data] == ["Elevenia", "Tokopedia", "Bukalapak"]
        table = capsys.readouterr().out
        assert "163 (46.3%)" in table and "350 (46.2%)" in table and "410 (54.1%)" in table

    def test_single_brand(self, write_jsonl, capsys):
        f = self._write_preds(write_jsonl, "t.jsonl", "Tokopedia", 2, 1)
        assert main(["compare", str(f)]) == 0
        out = capsys.readouterr().out
        table, _, payload = out.partition("\n\n")
        assert len(table.splitlines()) == 2
        assert len(json.loads(payload)) == 1

    def test_brandless(self, write_jsonl, capsys):
        f = write_jsonl("p.jsonl", [{"id": "1", "label": "positive"}, {"id": "2", "label": "negative"}])
        assert main(["compare", str(f)]) == 0
        captured = capsys.readouterr()
        assert "unattributed" in captured.out
        assert "warning" in captured.err

    def test_tested_counts_warning(self, write_jsonl, capsys):
        f = self._write_preds(write_jsonl, "b.jsonl", "Bukalapak", 3, 1)
        assert main(["compare", str(f), "--tested", "Bukalapak=10"]) == 0
        assert "10 documents tested but 4 classified" in capsys.readouterr().err
        assert main(["compare", str(f), "--tested", "Bukalapak"]) == 3

    def test_bad_predictions_file(self, write_jsonl):
        f = write_jsonl("p.jsonl", [{"id": "1", "label": "neutral"}])
        assert main(["compare", str(f)]) == 2


class TestConfig:
    def test_parse(self):
        values = parse_config_text("# run\nk = 5\nalpha=0.5  # smoothing\nstem_enabled = no\n"
                                   "stopword_path = /tmp/sw.txt\n")
        assert values == {"k": 5, "alpha": 0.5, "stem_enabled": False, "stopword_path": "/tmp/sw.txt"}

    @pytest.mark.parametrize("text", ["bogus = 1", "k = ten", "just words", "stem_enabled = maybe"])
    def test_rejects(self, text):
        with pytest.raises(ConfigError):
            parse_config_text(text)

    def test_unknown_key_exit_code(self, fixture_corpus, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("colour = blue\n")
        assert main(["evaluate", str(fixture_corpus), "--config", str(cfg)]) == 3

    def test_env_fallback_and_flag_override(self, fixture_corpus, tmp_path, monkeypatch):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("k = 4\nseed = 9\n")
        monkeypatch.setenv("SENTIMIN_CONFIG", str(cfg))
        out = tmp_path / "e.json"
        assert main(["evaluate", str(fixture_corpus), "--seed", "2", "--output", str(out)]) == 0
        report = json.loads(out.read_text())
        assert (report["k"], report["seed"]) == (4, 2)

    def test_missing_stopword_file_is_io_error(self, fixture_corpus, tmp_path):
        assert main(["evaluate", str(fixture_corpus), "--stopwords", str(tmp_path / "none.txt")]) == 2

    def test_usage_error_is_config_error(self):
        with pytest.raises(SystemExit) as err:
            main(["evaluate"])
        assert err.value.code == 3


def test_module_entry_point(fixture_corpus, tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "sentimin", "evaluate", str(fixture_corpus), "--k", "5",
         "--output", str(tmp_path / "e.json")],
        capture_output=True, text=True,
    )
    assert result.returncode == 0, result.stderr
    assert "5-fold cross-validation" in result.stdout
