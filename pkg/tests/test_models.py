import itertools
import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from mgtdetect.models import (KINDS, PROBA_KINDS, FeatureMatrix, FingerprintMismatch, ModelCompatError, ModelError, TrainConfig,
                              VotingModel, VotingTie, feature_importance, load_model, model_from_dict,
                              model_to_dict, predict, predict_proba, save_model, train)
from mgtdetect.models.linear import LinearModel, _sgd_epochs, hinge_loss_grad, logistic_loss_grad
from mgtdetect.models.mlp import init_params, loss_and_grad

FAST = TrainConfig(seed=3, n_trees=15, mlp_epochs=30, svm_iter=300)


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-300)


def numeric_grad(f, x, h=1e-6):
    g = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        old = x[idx]
        x[idx] = old + h
        up = f()
        x[idx] = old - h
        down = f()
        x[idx] = old
        g[idx] = (up - down) / (2 * h)
    return g


def problem(seed=0, n=12, m=5):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, m))
    y = (rng.random(n) < 0.5).astype(float)
    y[:2] = [0, 1][:n]
    return X, y, rng


def separable(n=40, seed=0):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    X = rng.random((n, 6)) * 0.4
    X[:, 0] += y  # column 0 separates the classes
    X[:, 3] += 1 - y
    return FeatureMatrix(X, [f"f{j}" for j in range(6)], y)


# ---------------------------------------------------------------- gradients

@pytest.mark.parametrize("sparse", [False, True])
def test_logistic_gradient(sparse):
    X, y, rng = problem()
    Xm = sp.csr_matrix(X) if sparse else X
    w, b, sw = rng.normal(size=5), np.array([0.3]), rng.random(12) + 0.5
    _, gw, gb = logistic_loss_grad(w, b[0], Xm, y, 0.1, sw)
    assert rel_err(numeric_grad(lambda: logistic_loss_grad(w, b[0], Xm, y, 0.1, sw)[0], w), gw) < 1e-5
    assert rel_err(numeric_grad(lambda: logistic_loss_grad(w, b[0], Xm, y, 0.1, sw)[0], b), np.array([gb])) < 1e-5


def test_hinge_gradient_off_the_hinge():
    X, y, rng = problem(1)
    w, b = rng.normal(size=5), np.array([0.1])
    s = 2 * y - 1
    assert np.min(np.abs(1 - s * (X @ w + b[0]))) > 1e-3  # no sample sits on a kink
    _, gw, gb = hinge_loss_grad(w, b[0], X, y, 0.05)
    assert rel_err(numeric_grad(lambda: hinge_loss_grad(w, b[0], X, y, 0.05)[0], w), gw) < 1e-5
    assert rel_err(numeric_grad(lambda: hinge_loss_grad(w, b[0], X, y, 0.05)[0], b), np.array([gb])) < 1e-5


def test_sgd_steps_follow_logistic_gradient():
    X, y, rng = problem(2, n=1)
    X1 = sp.csr_matrix(X)
    eta0, l2 = 0.2, 0.3
    w_sgd, b_sgd = _sgd_epochs(X1.indptr.astype(np.int64), X1.indices.astype(np.int64), X1.data, y, np.ones(1),
                               np.zeros((3, 1), dtype=np.int64), eta0, l2, 5)
    w, b = np.zeros(5), 0.0
    for t in range(3):
        eta = eta0 / (1 + eta0 * l2 * t)
        _, gw, gb = logistic_loss_grad(w, b, X, y, l2)
        w, b = w - eta * gw, b - eta * gb
    assert rel_err(w_sgd, w) < 1e-12 and abs(b_sgd - b) < 1e-12


def test_mlp_gradient():
    X, y, rng = problem(3)
    params = init_params(5, 4, rng)
    params["b1"] = rng.normal(size=4) * 0.1
    sw = rng.random(12) + 0.5
    _, grads = loss_and_grad(params, X, y, 0.01, sw)
    for k in ("W1", "b1", "W2"):
        num = numeric_grad(lambda: loss_and_grad(params, X, y, 0.01, sw)[0], params[k])
        assert rel_err(num, grads[k]) < 1e-5, k
    b2 = params["b2"].reshape(1)
    params["b2"] = b2
    num = numeric_grad(lambda: loss_and_grad(params, X, y, 0.01, sw)[0], b2)
    assert rel_err(num, np.atleast_1d(grads["b2"])) < 1e-5


# ---------------------------------------------------------------- naive Bayes

def brute_force_posterior(X, y, x, alpha=1.0):
    m = len(x)
    scores = []
    for c in (0, 1):
        rows = [X[i] for i in range(len(y)) if y[i] == c]
        totals = [sum(r[j] for r in rows) for j in range(m)]
        denom = sum(totals) + alpha * m
        p = len(rows) / len(y)
        for j in range(m):
            p *= ((totals[j] + alpha) / denom) ** x[j]
        scores.append(p)
    return scores[1] / (scores[0] + scores[1])


def test_mnb_worked_example():
    F = FeatureMatrix(np.array([[2, 0], [0, 2]]), ["a", "b"], [0, 1])
    model = train("mnb", F)
    assert predict_proba(model, FeatureMatrix(np.array([[1, 0]]), ["a", "b"]))[0] == pytest.approx(0.25, abs=1e-15)


@given(st.integers(1, 4), st.integers(2, 6), st.data())
def test_mnb_matches_enumeration(m, n, data):
    X = np.array(data.draw(st.lists(st.lists(st.integers(0, 3), min_size=m, max_size=m), min_size=n, max_size=n)))
    y = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n).filter(lambda v: 0 < sum(v) < len(v)))
    names = [f"t{j}" for j in range(m)]
    model = train("mnb", FeatureMatrix(X, names, y))
    for x in itertools.product(range(3), repeat=m):
        got = predict_proba(model, FeatureMatrix(np.array([x]), names))[0]
        assert abs(got - brute_force_posterior(X, y, x)) < 1e-12


def test_mnb_rejects_negative():
    with pytest.raises(ModelError, match="nonnegative"):
        train("mnb", FeatureMatrix(np.array([[1.0, -1.0], [0, 1]]), ["a", "b"], [0, 1]))


# ---------------------------------------------------------------- trees and forests

def test_tree_single_split():
    F = FeatureMatrix(np.array([[0.0], [1.0], [2.0], [3.0]]), ["x"], [0, 0, 1, 1])
    model = train("tree", F)
    assert model.tree.n_nodes == 3 and model.tree.threshold[0] == 1.5
    assert feature_importance(model).as_dict() == {"x": 1.0}


@pytest.mark.parametrize("sparse", [False, True])
@pytest.mark.parametrize("kind", ["tree", "forest"])
def test_tree_models_fit_separable_data(kind, sparse):
    F = separable()
    if sparse:
        F = FeatureMatrix(sp.csr_matrix(F.X), F.names, F.y)
    model = train(kind, F, FAST)
    assert np.array_equal(predict(model, F), F.y)
    imp = model.importances()
    assert abs(imp.sum() - 1.0) < 1e-9 and np.all(imp >= 0)


def test_forest_importances_and_threads():
    F = separable(60, seed=5)
    one = train("forest", F, FAST)
    many = train("forest", F, TrainConfig(**{**FAST.to_dict(), "threads": 4}))
    assert np.array_equal(one.importances(), many.importances())
    ranking = feature_importance(one)
    assert {ranking.top(2)[0][0], ranking.top(2)[1][0]} <= {"f0", "f3"}
    assert abs(sum(ranking.as_dict().values()) - 1) < 1e-9


@settings(max_examples=20)
@given(st.sampled_from([0.25, 2.0, 8.0]), st.integers(0, 10))
def test_tree_scaling_invariance(k, seed):
    F = separable(30, seed)
    scaled = FeatureMatrix(F.X * k, F.names, F.y)
    for kind in ("tree", "forest"):
        a, b = train(kind, F, FAST), train(kind, scaled, FAST)
        assert np.array_equal(predict(a, F), predict(b, scaled))


# ---------------------------------------------------------------- linear models and MLP

@pytest.mark.parametrize("kind", ["logreg", "sgd_linear", "svm_linear", "mlp", "mnb"])
def test_fits_separable_data(kind):
    F = separable(80, seed=2)
    model = train(kind, F, FAST)
    assert np.mean(predict(model, F) == F.y) >= 0.95


def test_logreg_converges_to_stationary_point():
    X, y, _ = problem(4, n=30)
    F = FeatureMatrix(X, [f"f{j}" for j in range(5)], y.astype(int))
    model = train("logreg", F, TrainConfig(l2=0.1, max_iter=5000, tol=1e-8))
    _, gw, gb = logistic_loss_grad(model.weights, model.bias, X, y, 0.1)
    assert math.hypot(np.linalg.norm(gw), gb) < 1e-6


def test_mlp_loss_decreases_and_balanced_weights():
    F = separable(60, seed=1)
    model = train("mlp", F, FAST)
    assert model.epoch_losses[-1] < model.epoch_losses[0]
    imbalanced = FeatureMatrix(F.X[:45], F.names, F.y[:45])
    assert train("logreg", imbalanced, TrainConfig(class_weight="balanced")).n_iter > 0


def test_zero_score_goes_positive():
    model = LinearModel("logreg", ["a"], 0, np.zeros(1), 0.0, 0)
    assert predict(model, FeatureMatrix(np.array([[1.0]]), ["a"]))[0] == 1


# ---------------------------------------------------------------- voting

def test_voting_majority_and_ties():
    names = ["a"]
    pos = LinearModel("logreg", names, 0, np.ones(1), 0.0, 0)
    neg = LinearModel("logreg", names, 0, -np.ones(1), 0.0, 0)
    X = FeatureMatrix(np.array([[1.0], [2.0]]), names)
    assert predict(VotingModel("voting", names, 0, (pos, neg, neg)), X).tolist() == [0, 0]
    assert predict(VotingModel("voting", names, 0, (pos, neg)), X).tolist() == [1, 1]
    with pytest.raises(VotingTie):
        predict(VotingModel("voting", names, 0, (pos, neg), tie_to_positive=False), X)
    with pytest.raises(ModelError):
        predict_proba(VotingModel("voting", names, 0, (pos,)), X)


def test_voting_reuses_members():
    F = separable()
    members = {k: train(k, F, FAST) for k in ("logreg", "forest", "mnb")}
    vote = train("voting", F, FAST, members=members)
    assert vote.members[1] is members["forest"]
    assert np.array_equal(predict(vote, F), F.y)


# ---------------------------------------------------------------- contracts and persistence

def test_errors():
    F = separable()
    with pytest.raises(ModelError, match="single-class"):
        train("logreg", FeatureMatrix(F.X[::2], F.names, F.y[::2]))
    with pytest.raises(ModelError, match="unknown model kind"):
        train("knn", F)
    with pytest.raises(ModelError):
        FeatureMatrix(np.array([[np.nan]]), ["a"])
    with pytest.raises(ModelError):
        FeatureMatrix(np.ones((2, 2)), ["a", "a"])
    with pytest.raises(ModelError):
        FeatureMatrix(np.ones((2, 1)), ["a"], [0, 2])
    with pytest.raises(ModelError):
        feature_importance(train("mnb", F))
    model = train("logreg", F, FAST)
    other = FeatureMatrix(F.X, [f"g{j}" for j in range(6)])
    with pytest.raises(FingerprintMismatch):
        predict(model, other)


@pytest.mark.parametrize("kind", KINDS)
def test_persistence_round_trip(tmp_path, kind):
    F = separable()
    model = train(kind, F, FAST)
    path = tmp_path / f"{kind}.json"
    save_model(model, path, featurizer={"note": 1})
    back, feat = load_model(path)
    assert feat == {"note": 1} and back.kind == kind and back.fingerprint == model.fingerprint
    assert np.array_equal(predict(back, F), predict(model, F))
    if kind in PROBA_KINDS:
        assert np.array_equal(predict_proba(back, F), predict_proba(model, F))
    d = model_to_dict(model)
    with pytest.raises(ModelCompatError):
        model_from_dict({**d, "version": 99})
    with pytest.raises(ModelCompatError):
        model_from_dict({**d, "fingerprint": "0" * 64})
    (tmp_path / "junk.json").write_text("[1, 2]")
    with pytest.raises(ModelCompatError):
        load_model(tmp_path / "junk.json")
