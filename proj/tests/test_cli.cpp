#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome rfgen(const std::string& args)
{
    const std::string cmd = std::string(RFGEN_CLI_PATH) + " " + args + " 2>/dev/null";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return o;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        o.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

std::string iris_path()
{
    return std::string(RFGEN_DATA_DIR) + "/iris.csv";
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string header(const fs::path& csv)
{
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    return line;
}

std::size_t count_fields(const std::string& line)
{
    return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() / ("rfgen_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string augment(const std::string& name, const std::string& extra = "")
    {
        const auto prefix = (dir_ / name).string();
        const auto r = rfgen("augment --input " + iris_path() + " --out " + prefix + " --pop 48 --gens 2 --seed 3 " + extra);
        EXPECT_EQ(r.code, 0) << r.out;
        return prefix;
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, AugmentWritesDatasetAndProvenance)
{
    const auto prefix = augment("aug");
    const std::string h = header(prefix + ".csv");
    EXPECT_EQ(count_fields(h), 24u + 1u);
    EXPECT_EQ(h.rfind("F0,F1,F2,F3,F0a,", 0), 0u);
    const auto prov = nlohmann::json::parse(slurp(prefix + ".provenance.json"));
    EXPECT_EQ(prov.at("schema_version"), 1);
}

TEST_F(Cli, AugmentIsByteIdenticalForEqualSeeds)
{
    const auto a = augment("a");
    const std::string csv = slurp(a + ".csv");
    const std::string prov = slurp(a + ".provenance.json");
    augment("a");
    EXPECT_EQ(slurp(a + ".csv"), csv);
    EXPECT_EQ(slurp(a + ".provenance.json"), prov);
    // the worker count changes only the echoed config
    const auto b = augment("b", "--jobs 2");
    EXPECT_EQ(slurp(b + ".csv"), csv);
}

TEST_F(Cli, TreeCountFlag)
{
    const auto prefix = augment("t3", "--trees 3");
    EXPECT_EQ(count_fields(header(prefix + ".csv")), 16u + 1u);
}

TEST_F(Cli, ConfigFileIsOverriddenByFlags)
{
    const auto cfg = dir_ / "cfg.json";
    std::ofstream(cfg) << R"({"evolution": {"fitness": {"n_trees": 2}, "population_size": 32, "generations": 1}})";
    const auto prefix = (dir_ / "c").string();
    auto r = rfgen("augment --input " + iris_path() + " --out " + prefix + " --config " + cfg.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(count_fields(header(prefix + ".csv")), 12u + 1u);
    r = rfgen("augment --input " + iris_path() + " --out " + prefix + " --config " + cfg.string() + " --trees 4");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(count_fields(header(prefix + ".csv")), 20u + 1u);
}

TEST_F(Cli, MiSelfPairIsOne)
{
    const auto r = rfgen("mi --input " + iris_path() + " --cols F0,F2 --json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("normalized_mi")[0][0].get<double>(), 1.0);
    EXPECT_EQ(j.at("normalized_mi")[1][1].get<double>(), 1.0);
    EXPECT_LT(j.at("normalized_mi")[0][1].get<double>(), 1.0);
}

TEST_F(Cli, JsonOutputsCarrySchemaAndConfig)
{
    for (const std::string cmd : {"rank", "select", "classify", "cluster --k 3 --restarts 2"}) {
        const auto r = rfgen(cmd + " --input " + iris_path() + " --json --seed 4");
        ASSERT_EQ(r.code, 0) << cmd;
        const auto j = nlohmann::json::parse(r.out);
        EXPECT_EQ(j.at("schema_version"), 1);
        EXPECT_EQ(j.at("config").at("seed"), 4);
    }
}

TEST_F(Cli, RankOrdersIrisFeatures)
{
    const auto j = nlohmann::json::parse(rfgen("rank --input " + iris_path() + " --json").out);
    const auto& ranking = j.at("ranking");
    ASSERT_EQ(ranking.size(), 4u);
    EXPECT_EQ(ranking[0].at("feature"), "F2");
    EXPECT_EQ(ranking[1].at("feature"), "F3");
}

TEST_F(Cli, SelectUsesThreeWaySplitByDefault)
{
    const auto j = nlohmann::json::parse(rfgen("select --input " + iris_path() + " --json").out);
    EXPECT_DOUBLE_EQ(j.at("config").at("split").at("validation").get<double>(), 0.2);
    const auto k = nlohmann::json::parse(rfgen("classify --input " + iris_path() + " --json").out);
    EXPECT_DOUBLE_EQ(k.at("config").at("split").at("test").get<double>(), 0.3);
}

TEST_F(Cli, PlotWritesOneScatterPerRedundantFeature)
{
    const auto prefix = augment("p");
    const auto out = dir_ / "plots";
    const auto r = rfgen("plot --input " + prefix + ".csv --out " + out.string());
    ASSERT_EQ(r.code, 0);
    int svg = 0;
    int csv = 0;
    for (const auto& e : fs::directory_iterator(out)) {
        svg += e.path().extension() == ".svg";
        csv += e.path().extension() == ".csv";
    }
    EXPECT_EQ(svg, 20);
    EXPECT_EQ(csv, 20);
    EXPECT_NE(slurp(out / "F1_F1c.svg").find("F1c (MI="), std::string::npos);
    EXPECT_EQ(header(out / "F1_F1c.csv"), "F1,F1c,label");

    const auto jittered = dir_ / "jit";
    ASSERT_EQ(rfgen("plot --jitter --input " + prefix + ".csv --out " + jittered.string()).code, 0);
    EXPECT_EQ(slurp(out / "F1_F1c.csv"), slurp(jittered / "F1_F1c.csv"));
    EXPECT_NE(slurp(out / "F1_F1c.svg"), slurp(jittered / "F1_F1c.svg"));
}

TEST_F(Cli, ExitCodes)
{
    EXPECT_EQ(rfgen("").code, 1);
    EXPECT_EQ(rfgen("rank").code, 1);
    EXPECT_EQ(rfgen("rank --input " + iris_path() + " --frobnicate").code, 1);
    EXPECT_EQ(rfgen("select --input " + iris_path() + " --wrapper svm").code, 1);
    EXPECT_EQ(rfgen("select --input " + iris_path() + " --split 60,x,20").code, 1);
    EXPECT_EQ(rfgen("augment --input " + iris_path() + " --out " + (dir_ / "x").string() + " --theta 2").code, 1);
    EXPECT_EQ(rfgen("rank --input " + (dir_ / "missing.csv").string()).code, 2);

    const auto bad = dir_ / "bad.csv";
    std::ofstream(bad) << "a,b,class\n1,2,x\n3,oops,y\n";
    EXPECT_EQ(rfgen("rank --input " + bad.string()).code, 2);

    const auto constant = dir_ / "constant.csv";
    std::ofstream(constant) << "a,b,class\n1,1,x\n1,2,y\n1,3,x\n1,4,y\n1,5,x\n1,6,y\n";
    EXPECT_EQ(rfgen("augment --input " + constant.string() + " --out " + (dir_ / "c").string() + " --pop 16 --gens 1").code, 2);
}
