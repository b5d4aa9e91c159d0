#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ftq/channel.hpp"
#include "ftq/cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Outcome o;
    o.code = ftq::cli::run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

json without_timestamp(const std::string& text) {
    json doc = json::parse(text);
    doc.erase("timestamp");
    return doc;
}

std::filesystem::path temp_path(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(Cli, CoherentInfoDephasing) {
    const Outcome o = run({"coherent-info", "--family", "dephasing", "--param", "0.1", "--g", "1"});
    ASSERT_EQ(o.code, 0) << o.err;
    const json doc = json::parse(o.out);
    EXPECT_NEAR(doc["result"]["value"].get<double>(), 0.5310044, 1e-4);
    EXPECT_EQ(doc["tool"], "ftq");
    EXPECT_EQ(doc["command"], "coherent-info");
    EXPECT_EQ(doc["inputs"]["family"], "dephasing");
    EXPECT_EQ(doc["provenance"]["seed"], 0);
    EXPECT_FALSE(doc["provenance"]["converged"].empty());
    EXPECT_TRUE(doc.contains("timestamp"));
}

TEST(Cli, BoundProp1) {
    const Outcome o = run({"bound", "prop1", "--d", "100", "--g", "2", "--ic", "1.0620086"});
    ASSERT_EQ(o.code, 0) << o.err;
    const json doc = json::parse(o.out);
    EXPECT_NEAR(doc["result"]["value"].get<double>(), 168.886, 1e-3);
    EXPECT_FALSE(doc["provenance"]["formulas"].empty());
}

TEST(Cli, BoundComputesIcFromChannel) {
    const Outcome o = run({"bound", "corollary1", "--g", "2", "--family", "dephasing", "--param", "0.1",
                           "--restarts", "4"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NEAR(json::parse(o.out)["result"]["value"].get<double>(), 1.88322354377324, 1e-4);
}

TEST(Cli, EveryBoundKindRuns) {
    const std::vector<std::vector<std::string>> cases = {
        {"bound", "thm1", "--d", "100", "--g", "2", "--G", "50", "--eps", "0.05", "--ic", "1.062009"},
        {"bound", "lemma1", "--eps-i", "0.1,0,0", "--eps", "0.1", "--ic", "0.5"},
        {"bound", "oneshot", "--eps-i", "0.25", "--ic", "0"},
        {"bound", "p1", "--G", "4", "--eps", "0.05", "--ic", "1"},
        {"bound", "p3", "--G", "4", "--eps", "0.05"},
        {"bound", "prop2", "--d", "10", "--g", "2"},
        {"bound", "appendixD", "--G", "5", "--eps", "0.05", "--alpha", "2", "--ic", "0.3"},
        {"bound", "appendixD-dmax", "--alpha", "2"},
    };
    for (const auto& args : cases) {
        const Outcome o = run(args);
        EXPECT_EQ(o.code, 0) << args[1] << ": " << o.err;
    }
    const json d = json::parse(run({"bound", "appendixD-dmax", "--alpha", "2"}).out);
    EXPECT_NEAR(d["result"]["value"].get<double>(), 2.0 / (3.0 * std::log(2.0)), 1e-12);
}

TEST(Cli, ThresholdDepolarizing) {
    const Outcome o = run({"threshold", "--family", "depolarizing", "--g", "1"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NEAR(json::parse(o.out)["result"]["threshold"].get<double>(), 0.2524, 5e-3);
}

TEST(Cli, CompareCapacity) {
    const Outcome o = run({"compare-capacity", "--family", "dephasing", "--param", "0.1", "--k-max", "2",
                           "--restarts", "4"});
    ASSERT_EQ(o.code, 0) << o.err;
    const json doc = json::parse(o.out);
    EXPECT_EQ(doc["result"]["rows"].size(), 2u);
    EXPECT_TRUE(doc["result"]["upper_estimate"].get<bool>());
}

TEST(Cli, ChannelFileSource) {
    const auto path = temp_path("ftq_cli_channel.json");
    std::ofstream(path) << ftq::channel_to_json(ftq::dephasing(0.1));
    const Outcome o = run({"coherent-info", "--channel-file", path.string(), "--restarts", "4"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NEAR(json::parse(o.out)["result"]["value"].get<double>(), 0.5310044, 1e-4);
}

TEST(Cli, ValidationErrorsExitTwoAndNameTheFlag) {
    Outcome o = run({"coherent-info", "--family", "dephasing", "--param", "0.1", "--bogus", "3"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("--bogus"), std::string::npos) << o.err;

    o = run({"coherent-info", "--family", "dephasing", "--param", "0.9"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("--param"), std::string::npos) << o.err;

    o = run({"coherent-info", "--channel-file", "/nonexistent/file.json"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("--channel-file"), std::string::npos) << o.err;

    o = run({"bound", "thm1", "--d", "100", "--g", "2", "--G", "50", "--eps", "0.5", "--ic", "1"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("--eps"), std::string::npos) << o.err;

    o = run({"coherent-info", "--family", "dephasing", "--param", "0.1", "--channel-file", "x.json"});
    EXPECT_EQ(o.code, 2);

    o = run({"coherent-info", "--family", "dephasing", "--param", "0.1", "--restarts", "0"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("--restarts"), std::string::npos) << o.err;

    o = run({"bound", "prop1", "--d", "100", "--g", "2"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("--ic"), std::string::npos) << o.err;

    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, UnwritableOutputExitsThree) {
    const Outcome o = run({"bound", "appendixD-dmax", "--alpha", "2", "--output", "/nonexistent/dir/out.json"});
    EXPECT_EQ(o.code, 3);
    EXPECT_NE(o.err.find("--output"), std::string::npos) << o.err;
}

TEST(Cli, SweepCsv) {
    const auto path = temp_path("ftq_sweep.csv");
    const std::vector<std::string> args = {"sweep", "--family", "dephasing", "--grid", "0:0.5:3", "--format", "csv",
                                           "--restarts", "4", "--output", path.string()};
    ASSERT_EQ(run(args).code, 0);
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], "param,ic_bits,prop1_bound,vacuous");

    const json doc = json::parse(run({"sweep", "--family", "dephasing", "--grid", "0:0.5:3", "--restarts", "4"}).out);
    for (std::size_t k = 0; k < 3; ++k) {
        std::stringstream row(lines[k + 1]);
        std::string param, ic, prop1;
        std::getline(row, param, ',');
        std::getline(row, ic, ',');
        std::getline(row, prop1, ',');
        const json& point = doc["result"]["points"][k];
        EXPECT_NEAR(std::stod(param), point["param"].get<double>(), 1e-10);
        EXPECT_NEAR(std::stod(ic), point["ic"].get<double>(), 1e-10);
        EXPECT_NEAR(std::stod(prop1), point["prop1"].get<double>(), 1e-10 * point["prop1"].get<double>());
    }

    std::stringstream first;
    first << std::ifstream(path).rdbuf();
    ASSERT_EQ(run(args).code, 0);
    std::stringstream second;
    second << std::ifstream(path).rdbuf();
    EXPECT_EQ(first.str(), second.str());
}

TEST(Cli, SweepCsvUnwritable) {
    const Outcome o = run({"sweep", "--family", "dephasing", "--grid", "0:0.5:3", "--format", "csv", "--restarts",
                           "2", "--output", "/nonexistent/dir/out.csv"});
    EXPECT_EQ(o.code, 3);
}

TEST(Cli, CsvOnlyForSweep) {
    EXPECT_EQ(run({"bound", "appendixD-dmax", "--alpha", "2", "--format", "csv"}).code, 2);
}

TEST(Cli, RepeatedRunsAreIdentical) {
    const std::vector<std::vector<std::string>> commands = {
        {"coherent-info", "--family", "amplitude_damping", "--param", "0.3", "--g", "2", "--seed", "9"},
        {"renyi-info", "--family", "dephasing", "--param", "0.2", "--alpha", "2", "--restarts", "3"},
        {"sweep", "--family", "depolarizing", "--grid", "0.1:0.3:3", "--restarts", "4", "--seed", "3"},
    };
    for (const auto& args : commands) {
        const Outcome a = run(args);
        const Outcome b = run(args);
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(without_timestamp(a.out).dump(), without_timestamp(b.out).dump()) << args[0];
    }
}
