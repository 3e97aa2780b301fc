#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "biglide/csv.hpp"
#include "biglide/dataset.hpp"

using namespace biglide;

namespace {

bool same_dataset(const MechanismDataset& a, const MechanismDataset& b) {
    return a.a == b.a && a.L1 == b.L1 && a.L2 == b.L2 && a.L_tool == b.L_tool &&
           a.m_leg1 == b.m_leg1 && a.m_leg2 == b.m_leg2 && a.m_tool == b.m_tool &&
           a.L_g1 == b.L_g1 && a.L_g2 == b.L_g2 &&
           a.drive_stiffness == b.drive_stiffness && a.j_foot == b.j_foot &&
           a.j_leg1 == b.j_leg1 && a.j_leg2 == b.j_leg2 && a.k_foot == b.k_foot &&
           a.k_leg1 == b.k_leg1 && a.k_leg2 == b.k_leg2 && a.k_tool == b.k_tool;
}

} // namespace

TEST_CASE("built-in machine parameters") {
    const MechanismDataset ds = builtin_dataset();
    CHECK(ds.a == 0.92);
    CHECK(ds.L1 == 0.85);
    CHECK(ds.L2 == 0.775);
    CHECK(ds.L_tool == 0.155);
    CHECK(ds.m_leg1 == 69.705);
    CHECK(ds.m_leg2 == 49.366);
    CHECK(ds.m_tool == 46.0);
    CHECK(ds.L_g1 == 0.542);
    CHECK(ds.L_g2 == 0.375);
    CHECK(ds.drive_stiffness == 1e9);
    CHECK(ds.j_foot(0, 0) == 0.268);
    CHECK(ds.j_foot(1, 1) == 0.211);
    CHECK(ds.j_foot(2, 2) == 0.261);
    CHECK(ds.j_foot(0, 1) == 0.0);
    CHECK(ds.j_leg1(0, 0) == 1.187);
    CHECK(ds.j_leg1(0, 2) == -1.247);
    CHECK(ds.j_leg1(2, 0) == -1.247);
    CHECK(ds.j_leg2(2, 2) == 0.635);
    CHECK(ds.k_foot(0, 0) == 1.67e-10);
    CHECK(ds.k_foot(1, 5) == 3.94e-10);
    CHECK(ds.k_foot(5, 1) == 3.94e-10);
    CHECK(ds.k_leg1(0, 1) == -1.01e-8);
    CHECK(ds.k_leg1(1, 2) == -1.83e-9);
    CHECK(ds.k_leg2(3, 3) == 2.52e-7);
    // the tool matrix is kept exactly as measured, including its slight
    // asymmetry; symmetrization happens downstream
    CHECK(ds.k_tool(0, 1) == -9.70e-11);
    CHECK(ds.k_tool(1, 0) == 9.70e-11);
    CHECK(ds.k_tool(3, 4) == 4.23e-7);
    CHECK(ds.k_tool(4, 3) == 4.23e-7);
}

TEST_CASE("built-in dataset passes validation with a tool-asymmetry warning") {
    const ValidationReport rep = validate_dataset(builtin_dataset());
    CHECK(rep.ok());
    CHECK(rep.errors.empty());
    bool tool_warning = false;
    for (const auto& w : rep.warnings) {
        if (w.find("k_tool") != std::string::npos) tool_warning = true;
        CHECK(w.find("k_foot") == std::string::npos);
    }
    CHECK(tool_warning);
}

TEST_CASE("all symmetrized compliances are positive definite") {
    const MechanismDataset ds = builtin_dataset();
    for (const Mat6* c : {&ds.k_foot, &ds.k_leg1, &ds.k_leg2, &ds.k_tool})
        CHECK_NOTHROW(invert_symmetric(symmetrized_compliance(*c)));
}

TEST_CASE("validation flags broken datasets") {
    SECTION("gross compliance asymmetry is an error") {
        MechanismDataset ds = builtin_dataset();
        const double bump = 1e-3 * ds.k_foot.cwiseAbs().maxCoeff();
        ds.k_foot(0, 1) += bump;
        ds.k_foot(1, 0) -= bump;
        const ValidationReport rep = validate_dataset(ds);
        CHECK(!rep.ok());
        REQUIRE(!rep.errors.empty());
        CHECK(rep.errors[0].find("k_foot") != std::string::npos);
    }
    SECTION("indefinite compliance is an error") {
        MechanismDataset ds = builtin_dataset();
        ds.k_leg2 = -ds.k_leg2;
        CHECK(!validate_dataset(ds).ok());
    }
    SECTION("non-finite entries are an error") {
        MechanismDataset ds = builtin_dataset();
        ds.k_leg1(2, 2) = std::numeric_limits<double>::quiet_NaN();
        CHECK(!validate_dataset(ds).ok());
    }
    SECTION("non-positive scalars are errors") {
        MechanismDataset ds = builtin_dataset();
        ds.m_tool = 0.0;
        CHECK(!validate_dataset(ds).ok());
        ds = builtin_dataset();
        ds.drive_stiffness = -1e9;
        CHECK(!validate_dataset(ds).ok());
    }
    SECTION("legs must reach across the rails") {
        MechanismDataset ds = builtin_dataset();
        ds.a = ds.L1 + ds.L2 + 0.1;
        CHECK(!validate_dataset(ds).ok());
    }
}

TEST_CASE("dataset text round trip preserves every field bit for bit") {
    const MechanismDataset ds = builtin_dataset();
    std::ostringstream os;
    save_dataset(ds, os);
    std::istringstream is(os.str());
    const MechanismDataset back = parse_dataset(is);
    CHECK(same_dataset(ds, back));
}

TEST_CASE("full-precision formatting round trips doubles") {
    for (const double v : {0.1, 1.0 / 3.0, 1e-300, -7.2e17, 3.94e-10, 0.0}) {
        const std::string s = format_full(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("dataset parser reports malformed input with line numbers") {
    const auto parse_str = [](const std::string& text) {
        std::istringstream is(text);
        return parse_dataset(is);
    };
    const auto message_of = [&](const std::string& text) {
        try {
            parse_str(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };

    SECTION("unknown key") {
        const std::string msg = message_of("# header\nbogus.key_m 1.0\n");
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("bogus.key_m") != std::string::npos);
    }
    SECTION("duplicate key") {
        const std::string msg =
            message_of("geometry.a_m 0.92\ngeometry.a_m 0.92\n");
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("duplicate") != std::string::npos);
    }
    SECTION("wrong arity") {
        const std::string msg = message_of("inertia.j_foot_kgm2 1 2 3\n");
        CHECK(msg.find("line 1") != std::string::npos);
        CHECK(msg.find("expects 9") != std::string::npos);
    }
    SECTION("bad number") {
        const std::string msg = message_of("geometry.a_m zero\n");
        CHECK(msg.find("line 1") != std::string::npos);
        CHECK(msg.find("zero") != std::string::npos);
    }
    SECTION("missing keys") {
        const std::string msg = message_of("geometry.a_m 0.92\n");
        CHECK(msg.find("missing key") != std::string::npos);
    }
    SECTION("comments and blank lines are ignored") {
        std::ostringstream os;
        save_dataset(builtin_dataset(), os);
        const std::string text = "# leading comment\n\n" + os.str() + "\n# trailing\n";
        CHECK_NOTHROW(parse_str(text));
    }
}

TEST_CASE("load_dataset resolves the built-in name and validates files") {
    const MechanismDataset by_name = load_dataset("ifw");
    CHECK(same_dataset(by_name, builtin_dataset()));

    const std::string path = "/tmp/biglide_test_dataset.txt";
    save_dataset(builtin_dataset(), path);
    const MechanismDataset by_path = load_dataset(path);
    CHECK(same_dataset(by_path, builtin_dataset()));

    CHECK_THROWS_AS(load_dataset("/tmp/biglide_no_such_file.txt"), IoError);

    // a dataset that parses but violates an invariant must not load
    MechanismDataset bad = builtin_dataset();
    bad.m_tool = -1.0;
    const std::string bad_path = "/tmp/biglide_test_bad_dataset.txt";
    save_dataset(bad, bad_path);
    CHECK_THROWS_AS(load_dataset(bad_path), ValidationError);
}

// --- command-line binary, driven through the shell ---

namespace {

const char* cli_path() { return std::getenv("BIGLIDE_CLI"); }

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string("\"") + cli_path() + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("command-line interface") {
    if (!cli_path()) SKIP("BIGLIDE_CLI not set; run through ctest");

    SECTION("validate the built-in dataset") {
        CHECK(run_cli("validate --dataset ifw") == 0);
    }
    SECTION("validate reports an invalid dataset with exit 1") {
        MechanismDataset bad = builtin_dataset();
        bad.drive_stiffness = 0.0;
        save_dataset(bad, "/tmp/biglide_cli_bad.txt");
        CHECK(run_cli("validate --dataset /tmp/biglide_cli_bad.txt") == 1);
    }
    SECTION("missing files exit 2") {
        CHECK(run_cli("validate --dataset /tmp/biglide_cli_missing.txt") == 2);
        CHECK(run_cli("stiffness-map --dataset /tmp/biglide_cli_missing.txt") == 2);
    }
    SECTION("bad usage exits 2") {
        CHECK(run_cli("") == 2);
        CHECK(run_cli("no-such-command") == 2);
        CHECK(run_cli("stiffness-map --model bogus") == 2);
    }
    SECTION("show-dataset prints the parseable text form") {
        const std::string out = "/tmp/biglide_cli_show.txt";
        const std::string cmd = std::string("\"") + cli_path() +
                                "\" show-dataset --dataset ifw > " + out + " 2>/dev/null";
        REQUIRE(std::system(cmd.c_str()) == 0);
        std::ifstream is(out);
        const MechanismDataset back = parse_dataset(is);
        CHECK(same_dataset(back, builtin_dataset()));
    }
    SECTION("stiffness map to a file") {
        const std::string out = "/tmp/biglide_cli_stiffness.csv";
        CHECK(run_cli("stiffness-map --model simplified --grid 5 --out " + out) == 0);
        const std::vector<SweepRecord> records = parse_csv(out);
        CHECK(records.size() == 7 * 2); // 5 interior + 2 endpoints
        for (const auto& r : records)
            CHECK(r.model == ModelKind::SimplifiedStiffness);
    }
    SECTION("refined stiffness map with tool compliance flag") {
        const std::string out = "/tmp/biglide_cli_refined.csv";
        CHECK(run_cli("stiffness-map --model refined --grid 3 --tool-compliance on --out " +
                      out) == 0);
        CHECK(parse_csv(out).size() == 5 * 3);
    }
    SECTION("frequency map to a file") {
        const std::string out = "/tmp/biglide_cli_frequency.csv";
        CHECK(run_cli("frequency-map --model simplified --grid 5 --out " + out) == 0);
        const std::vector<SweepRecord> records = parse_csv(out);
        CHECK(records.size() == 5);
        for (const auto& r : records) CHECK(r.metric == "f1_hz");
    }
    SECTION("alpha sweep to a file") {
        const std::string out = "/tmp/biglide_cli_alpha.csv";
        CHECK(run_cli("alpha-sweep --model simplified --alpha-min 0.9 "
                      "--alpha-max 1.1 --alpha-step 0.1 --out " +
                      out) == 0);
        const std::vector<SweepRecord> records = parse_csv(out);
        CHECK(records.size() == 3 * 3 * 3); // alphas x stations x metrics
    }
}
