import numpy as np
import pytest

from keywordga import (
    CategoryId,
    ConfigError,
    EvalReport,
    EvaluationError,
    FeatureMatrix,
    InputError,
    KnnConfig,
    classify,
    euclidean_distance,
    evaluate,
    fitness_from_report,
    report_from_predictions,
)
from helpers import make_categories, make_instance
from oracles import ref_euclidean, ref_knn_predict, ref_metrics


class TestEuclideanDistance:
    def test_three_four_five(self):
        assert euclidean_distance((0.0, 0.0), (3.0, 4.0)) == 5.0

    def test_identical_vectors(self):
        v = [0.1, 0.2, 0.3]
        assert euclidean_distance(v, v) == 0.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(InputError):
            euclidean_distance([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_matches_loop_oracle(self, rng):
        for _ in range(30):
            a = rng.random(30)
            b = rng.random(30)
            assert abs(euclidean_distance(a, b) - ref_euclidean(a, b)) < 1e-12


class TestKnnConfig:
    def test_k_must_be_positive(self):
        with pytest.raises(ConfigError):
            KnnConfig(k=0)

    def test_unknown_tie_rule_rejected(self):
        with pytest.raises(ConfigError):
            KnnConfig(k=1, tie_break="random")


class TestClassify:
    def test_k1_returns_exact_match_category(self, rng):
        train, _ = make_instance(rng, 3, 12, 1, 5)
        for j in range(train.n_docs):
            got = classify(train, train.values[:, j], KnnConfig(k=1))
            assert got == train.labels[j]

    def test_k3_strict_majority(self):
        cats = make_categories(2)
        train = FeatureMatrix(
            ("w",),
            ("d0", "d1", "d2"),
            np.array([[0.0, 0.1, 0.9]]),
            (cats[0], cats[0], cats[1]),
            cats,
        )
        # neighbors of 0.05 at k=3 are {A, A, B} -> A
        assert classify(train, [0.05], KnnConfig(k=3)) == cats[0]

    def test_k_exceeding_train_size_rejected(self, rng):
        train, _ = make_instance(rng, 2, 4, 1, 3)
        with pytest.raises(ConfigError):
            classify(train, train.values[:, 0], KnnConfig(k=5))

    def test_query_length_mismatch_rejected(self, rng):
        train, _ = make_instance(rng, 2, 4, 1, 3)
        with pytest.raises(InputError):
            classify(train, [0.1, 0.2], KnnConfig(k=1))

    def test_agrees_with_full_sort_oracle(self, rng):
        for trial in range(12):
            quantized = trial % 2 == 0
            n_cat = int(rng.integers(2, 6))
            train, test = make_instance(rng, n_cat, 25, 8, 6, quantized=quantized)
            points = train.column_points()
            labels = train.label_indices()
            for k in (1, 3, 5):
                for j in range(test.n_docs):
                    query = test.values[:, j]
                    expected = ref_knn_predict(points, labels, query, k, n_cat)
                    got = classify(train, query, KnnConfig(k=k))
                    assert got.index == expected

    def test_column_order_invariant(self, rng):
        # same columns presented in a different order normalize identically
        cats = make_categories(2)
        values = rng.random((3, 4))
        ids = ("d0", "d1", "d2", "d3")
        labels = (cats[0], cats[1], cats[0], cats[1])
        a = FeatureMatrix(("x", "y", "z"), ids, values, labels, cats)
        perm = [3, 1, 0, 2]
        b = FeatureMatrix(
            ("x", "y", "z"),
            tuple(ids[j] for j in perm),
            values[:, perm],
            tuple(labels[j] for j in perm),
            cats,
        )
        for j in range(4):
            q = values[:, j] + 0.01
            assert classify(a, q, KnnConfig(k=3)) == classify(b, q, KnnConfig(k=3))


class TestEvaluate:
    def test_perfect_classifier(self, rng):
        train, _ = make_instance(rng, 3, 15, 1, 6)
        # score the training columns against themselves: k=1 self-match
        report = evaluate(train, train, KnnConfig(k=1))
        assert report.fitness == 0.0
        assert report.pr_avg == 1.0
        assert all(p in (1.0, None) for p in report.precision)
        assert all(r in (1.0, None) for r in report.recall)
        assert np.array_equal(
            report.confusion, np.diag(report.confusion.diagonal())
        )

    def test_basis_mismatch_rejected(self, rng):
        train, _ = make_instance(rng, 2, 5, 1, 4)
        other, _ = make_instance(rng, 2, 5, 1, 3)
        with pytest.raises(InputError, match="keyword bases"):
            evaluate(train, other, KnnConfig(k=1))

    def test_report_matches_confusion_oracle(self, rng):
        for _ in range(10):
            n_cat = int(rng.integers(2, 7))
            train, test = make_instance(rng, n_cat, 20, 12, 5)
            report = evaluate(train, test, KnnConfig(k=3))
            predicted = [
                ref_knn_predict(
                    train.column_points(), train.label_indices(), test.values[:, j], 3, n_cat
                )
                for j in range(test.n_docs)
            ]
            pr, rc, pr_avg, rc_avg, fit = ref_metrics(
                test.label_indices(), predicted, n_cat
            )
            assert report.precision == tuple(pr)
            assert report.recall == tuple(rc)
            assert abs(report.pr_avg - pr_avg) < 1e-12
            assert abs(report.rc_avg - rc_avg) < 1e-12
            assert abs(report.fitness - fit) < 1e-12


class TestReportFromPredictions:
    def test_everything_predicted_as_one_category(self):
        cats = make_categories(2)
        report = report_from_predictions([0, 0, 1, 1], [0, 0, 0, 0], cats)
        assert report.precision == (0.5, None)
        assert report.recall == (1.0, 0.0)
        assert report.pr_avg == 0.5
        assert report.rc_avg == 0.5
        assert report.fitness == 0.5

    def test_micro_consistency(self, rng):
        for _ in range(25):
            n_cat = int(rng.integers(2, 10))
            n = int(rng.integers(1, 60))
            true = rng.integers(0, n_cat, size=n)
            pred = rng.integers(0, n_cat, size=n)
            report = report_from_predictions(true, pred, make_categories(n_cat))
            predicted_totals = report.confusion.sum(axis=0)
            true_totals = report.confusion.sum(axis=1)
            total_correct = report.confusion.diagonal().sum()
            via_precision = sum(
                p * t for p, t in zip(report.precision, predicted_totals) if p is not None
            )
            via_recall = sum(
                r * t for r, t in zip(report.recall, true_totals) if r is not None
            )
            assert abs(via_precision - total_correct) < 1e-9
            assert abs(via_recall - total_correct) < 1e-9

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            report_from_predictions([], [], make_categories(2))

    def test_json_serialization_uses_null_for_undefined(self):
        cats = make_categories(2)
        report = report_from_predictions([0, 0], [0, 0], cats)
        assert '"precision": null' in report.to_json()
        parsed = report.to_dict()
        assert parsed["categories"][1]["precision"] is None


def _report_with_pr(pr_avg):
    cats = make_categories(2)
    return EvalReport(
        categories=cats,
        precision=(pr_avg, pr_avg),
        recall=(1.0, 1.0),
        pr_avg=pr_avg,
        rc_avg=1.0,
        fitness=1.0 - pr_avg,
        confusion=np.zeros((2, 2), dtype=np.int64),
    )


class TestFitnessFromReport:
    def test_perfect_precision_gives_zero(self):
        assert fitness_from_report(_report_with_pr(1.0)) == 0.0

    def test_published_style_values(self):
        assert abs(fitness_from_report(_report_with_pr(0.8417)) - 0.1583) < 1e-12
        assert abs(fitness_from_report(_report_with_pr(0.9142)) - 0.0858) < 1e-12

    def test_all_undefined_rejected(self):
        cats = make_categories(2)
        report = EvalReport(
            categories=cats,
            precision=(None, None),
            recall=(0.0, 0.0),
            pr_avg=0.0,
            rc_avg=0.0,
            fitness=1.0,
            confusion=np.zeros((2, 2), dtype=np.int64),
        )
        with pytest.raises(EvaluationError):
            fitness_from_report(report)

    def test_fitness_always_in_unit_interval(self, rng):
        for _ in range(20):
            n_cat = int(rng.integers(2, 8))
            n = int(rng.integers(1, 40))
            report = report_from_predictions(
                rng.integers(0, n_cat, size=n),
                rng.integers(0, n_cat, size=n),
                make_categories(n_cat),
            )
            assert 0.0 <= report.fitness <= 1.0
