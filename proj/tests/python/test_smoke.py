# Copyright 2026 The MDRD Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import mdrd


def test_clean_text():
    assert mdrd.clean_text("#سلام  دنیا") == "سلام دنیا"
    assert mdrd.clean_text("خبر 😂 فوری", {"😂": "خنده"}) == "خبر خنده فوری"
    assert mdrd.clean_text("http://a.b") is None


def test_zscore():
    mean, std, z = mdrd.zscore([2, 4, 6], [6, 4])
    assert mean == 4
    assert std == pytest.approx(1.632993, abs=1e-6)
    assert z[0] == pytest.approx(1.224745, abs=1e-6)
    assert z[1] == 0


def test_metrics_and_kappa():
    m = mdrd.classification_metrics([1, 1, 1, 1, 0, 0, 0, 0, 0, 0], [1, 1, 1, 0, 1, 0, 0, 0, 0, 0])
    assert m["accuracy"] == pytest.approx(0.8)
    assert m["rumor"]["f1"] == pytest.approx(0.75)
    assert mdrd.fleiss_kappa([[3, 0], [2, 1]]) == pytest.approx(-0.2, abs=1e-12)
    assert mdrd.kappa_band(0.74) == "Substantial agreement"
    with pytest.raises(mdrd.Error):
        mdrd.fleiss_kappa([[3, 0], [1, 1]])


def test_bce():
    assert mdrd.bce_loss([0.5], [1]) == pytest.approx(math.log(2), abs=1e-12)
    assert mdrd.bce_loss([1.0], [1]) <= 1.2e-7


def test_gradcheck():
    r = mdrd.gradcheck(7)
    assert r["checked"] > 1000
    assert r["max_rel_error"] < 1e-2


def test_model_predicts_probabilities(tmp_path):
    corpus = mdrd.synth(domains=2, per_domain=4, dim=8, layers=1)
    assert corpus["bayes_accuracy"] == 1.0
    config = {"embedding_dim": 8, "lstm_hidden": 4, "conv_filters": 2, "domain_dim": 4, "gate_hidden": 8,
              "mlp_hidden": [8], "domains": corpus["domains"]}
    model = mdrd.Model(config)
    posts = [{"tokens": r["layers"][0], "domain": corpus["domains"].index(r["domain"]), "metadata": [0.0, 0.0, 0.0]}
             for r in corpus["records"]]
    p = model.predict_proba(posts)
    assert p.shape == (8, 2)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)

    path = str(tmp_path / "m.bin")
    model.save(path)
    again = mdrd.Model.load(path)
    np.testing.assert_array_equal(again.predict_proba(posts), p)
    assert again.parameter_count == model.parameter_count

    with pytest.raises(mdrd.DimensionError):
        model.predict_proba([{"tokens": np.zeros((3, 5)), "domain": 0, "metadata": [0, 0, 0]}])
    with pytest.raises(mdrd.ConfigError):
        mdrd.Model({"no_such_key": 1})


def test_cli_round_trip(tmp_path):
    ratings = tmp_path / "r.txt"
    ratings.write_text("3 0\n2 1\n")
    code, out, _ = mdrd.run_cli(["kappa", "--ratings", str(ratings)])
    assert code == 0
    assert out.startswith("kappa = -0.200000")
    code, _, err = mdrd.run_cli(["train", "--config", str(tmp_path / "missing.cfg")])
    assert code == 2
    assert "missing.cfg" in err
