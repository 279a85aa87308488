#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "kcm/io.hpp"

using kcm::CsvTable;
using kcm::Matrix;
using kcm::Vector;

TEST_CASE("csv read and write round trip") {
    Matrix values(2, 3);
    values << 1.0, -0.5, 3.25, 1e-9, 2.0, -7.5;
    std::ostringstream out;
    kcm::write_csv(out, {"a", "b", "c"}, values);
    std::istringstream in(out.str());
    const CsvTable table = kcm::read_csv(in);
    CHECK(table.columns == std::vector<std::string>{"a", "b", "c"});
    CHECK((table.values - values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("csv error paths") {
    std::istringstream empty("");
    CHECK_THROWS_AS(kcm::read_csv(empty), kcm::InputError);
    std::istringstream ragged("a,b\n1.0\n");
    CHECK_THROWS_AS(kcm::read_csv(ragged), kcm::InputError);
    std::istringstream words("a,b\n1.0,zebra\n");
    CHECK_THROWS_AS(kcm::read_csv(words), kcm::InputError);
}

TEST_CASE("dataset_for_model layouts") {
    SUBCASE("regression picks y and x columns") {
        std::istringstream in("x1,y,x2\n1.0,5.0,2.0\n0.0,1.0,-1.0\n");
        const CsvTable table = kcm::read_csv(in);
        kcm::ResidualModel model;
        model.kind = kcm::ModelKind::regression;
        model.theta = Vector::Ones(2);
        const kcm::Dataset data = kcm::dataset_for_model(model, table);
        CHECK(data.p() == 3);
        CHECK(data.Z(0, 0) == 5.0);  // y first
        CHECK(data.Z(0, 1) == 1.0);
        CHECK(data.Z(0, 2) == 2.0);
        CHECK(data.x_index == std::vector<int>{1, 2});
    }
    SUBCASE("simeq requires Q P R W") {
        std::istringstream in("W,Q,P,R\n4.0,1.0,2.0,3.0\n");
        const CsvTable table = kcm::read_csv(in);
        kcm::ResidualModel model;
        model.kind = kcm::ModelKind::simeq;
        model.theta = Vector::Zero(4);
        const kcm::Dataset data = kcm::dataset_for_model(model, table);
        CHECK(data.Z(0, 0) == 1.0);
        CHECK(data.Z(0, 1) == 2.0);
        CHECK(data.Z(0, 2) == 3.0);
        CHECK(data.Z(0, 3) == 4.0);
        CHECK(data.x_index == std::vector<int>{2, 3});
    }
    SUBCASE("iv_regression splits treatments and instruments") {
        std::istringstream in("y,x1,z1,z2\n1.0,0.5,0.1,0.2\n2.0,1.5,0.3,0.4\n");
        const CsvTable table = kcm::read_csv(in);
        kcm::ResidualModel model;
        model.kind = kcm::ModelKind::iv_regression;
        model.theta = Vector::Ones(1);
        const kcm::Dataset data = kcm::dataset_for_model(model, table);
        CHECK(data.p() == 4);
        CHECK(data.x_index == std::vector<int>{2, 3});
    }
    SUBCASE("missing y column") {
        std::istringstream in("a,b\n1.0,2.0\n");
        const CsvTable table = kcm::read_csv(in);
        kcm::ResidualModel model;
        model.kind = kcm::ModelKind::regression;
        model.theta = Vector::Ones(1);
        CHECK_THROWS_AS(kcm::dataset_for_model(model, table), kcm::InputError);
    }
}

TEST_CASE("kernel spec json") {
    CHECK(kcm::kernel_spec_from_json(nlohmann::json::parse(
                                         R"({"family":"rbf","bandwidth":"median"})"))
              .median_bandwidth);
    const kcm::KernelSpec imq =
        kcm::kernel_spec_from_json(nlohmann::json::parse(R"({"family":"imq","c":2.0,"gamma":1.5})"));
    CHECK(imq.family == kcm::KernelFamily::imq);
    CHECK(imq.c == 2.0);
    CHECK(imq.gamma == 1.5);
    const kcm::KernelSpec fixed =
        kcm::kernel_spec_from_json(nlohmann::json::parse(R"({"family":"rbf","bandwidth":1.25})"));
    CHECK(fixed.bandwidth == 1.25);
    CHECK_FALSE(fixed.median_bandwidth);
    CHECK_THROWS_AS(
        kcm::kernel_spec_from_json(nlohmann::json::parse(R"({"family":"rbf","bandwidth":"mean"})")),
        kcm::InputError);
    CHECK_THROWS_AS(
        kcm::kernel_spec_from_json(nlohmann::json::parse(R"({"family":"triangle"})")),
        kcm::InputError);
}

TEST_CASE("model config json") {
    const kcm::ModelConfig config = kcm::model_config_from_json(nlohmann::json::parse(R"({
        "kind": "quantile",
        "theta": [0.5, -1.0],
        "tau": 0.25,
        "kernel": {"family": "rbf", "bandwidth": 2.0}
    })"));
    CHECK(config.model.kind == kcm::ModelKind::quantile);
    CHECK(config.model.theta.size() == 2);
    CHECK(config.model.tau == 0.25);
    CHECK(config.kernel.bandwidth == 2.0);

    // kernel block optional: defaults to rbf median
    const kcm::ModelConfig bare = kcm::model_config_from_json(
        nlohmann::json::parse(R"({"kind":"regression","theta":[1.0]})"));
    CHECK(bare.kernel.family == kcm::KernelFamily::rbf);
    CHECK(bare.kernel.median_bandwidth);
}

TEST_CASE("outcome json fields") {
    kcm::TestOutcome outcome;
    outcome.statistic = 1.5;
    outcome.critical_value = 2.0;
    outcome.p_value = 0.25;
    outcome.reject = false;
    outcome.bootstrap_draws = {0.5, 2.0};
    outcome.alpha = 0.05;
    outcome.seed = 17;
    const auto j = kcm::outcome_to_json(outcome);
    CHECK(j["statistic"] == 1.5);
    CHECK(j["critical_value"] == 2.0);
    CHECK(j["p_value"] == 0.25);
    CHECK(j["reject"] == false);
    CHECK(j["bootstrap_draws"].size() == 2);
    CHECK(j["alpha"] == 0.05);
    CHECK(j["seed"] == 17);
    const auto keys = {"statistic", "critical_value", "p_value", "reject",
                       "bootstrap_draws", "alpha", "seed"};
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i)
        CHECK(it.key() == *(keys.begin() + i));
}

TEST_CASE("dataset column names") {
    CHECK(kcm::dataset_columns(kcm::DgpKind::simeq, 0) ==
          std::vector<std::string>{"Q", "P", "R", "W"});
    CHECK(kcm::dataset_columns(kcm::DgpKind::reg_hom, 2) ==
          std::vector<std::string>{"y", "x1", "x2"});
}
