#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliResult {
    int exit_code;
    std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
    std::string out_path = std::string(ORTHO_CLI_PATH) + ".out.tmp";
    std::string cmd = std::string(ORTHO_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream f(out_path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::remove(out_path.c_str());
    return {WEXITSTATUS(rc), ss.str()};
}

nlohmann::json parse_output(const std::string& text) { return nlohmann::json::parse(text); }

}  // namespace

TEST_CASE("fgt emits a verifiable certificate") {
    auto r = run_cli("fgt --group Z7 --k 3");
    CHECK(r.exit_code == 0);
    auto j = parse_output(r.stdout_text);
    CHECK(j["kind"] == "orthomorphism");
    CHECK(j["cycle_type"] == "1+3^2");
    CHECK(j["verified"] == true);

    // round-trip through verify
    std::string cert = std::string(ORTHO_CLI_PATH) + ".cert.json";
    std::ofstream f(cert);
    f << r.stdout_text;
    f.close();
    auto v = run_cli("verify " + cert);
    CHECK(v.exit_code == 0);
    std::remove(cert.c_str());
}

TEST_CASE("corrupted certificates fail verification") {
    auto r = run_cli("fgt --group Z7 --k 3");
    auto j = parse_output(r.stdout_text);
    auto perm = j["perm"].get<std::vector<int>>();
    std::swap(perm[1], perm[0]);
    j["perm"] = perm;
    std::string cert = std::string(ORTHO_CLI_PATH) + ".bad.json";
    std::ofstream f(cert);
    f << j.dump();
    f.close();
    auto v = run_cli("verify " + cert);
    CHECK(v.exit_code == 1);
    std::remove(cert.c_str());
}

TEST_CASE("hall-paige exit codes") {
    auto yes = run_cli("hall-paige --group Z7");
    CHECK(yes.exit_code == 0);
    CHECK(parse_output(yes.stdout_text)["hall_paige"] == true);

    auto no = run_cli("hall-paige --group Z4");
    CHECK(no.exit_code == 1);
    CHECK(parse_output(no.stdout_text)["hall_paige"] == false);

    auto order = run_cli("hall-paige --order 8");
    auto arr = parse_output(order.stdout_text);
    REQUIRE(arr.is_array());
    CHECK(arr.size() == 3);
}

TEST_CASE("usage errors exit 64") {
    CHECK(run_cli("fgt --group Q8 --k 3").exit_code == 64);
    CHECK(run_cli("fgt --k 3").exit_code == 64);
    CHECK(run_cli("nonsense").exit_code == 64);
    CHECK(run_cli("verify /nonexistent.json").exit_code == 64);
}

TEST_CASE("nonexistent searches exit 1") {
    auto r = run_cli("fgt --group Z4 --k 3");
    CHECK(r.exit_code == 1);
    auto j = parse_output(r.stdout_text);
    CHECK(j["status"] == "nonexistent");
}

TEST_CASE("budget runs exit 2") {
    auto r = run_cli("fgt --group Z13 --k 3 --budget-nodes 2");
    CHECK(r.exit_code == 2);
}

TEST_CASE("zerosum-partition matches the library output") {
    auto r = run_cli("zerosum-partition --group Z7 --sizes 3,3");
    CHECK(r.exit_code == 0);
    auto j = parse_output(r.stdout_text);
    CHECK(j["blocks"] == nlohmann::json::parse("[[1,2,4],[3,5,6]]"));
    CHECK(j["block_sums"] == nlohmann::json::parse("[0,0]"));

    std::string cert = std::string(ORTHO_CLI_PATH) + ".part.json";
    std::ofstream f(cert);
    f << r.stdout_text;
    f.close();
    CHECK(run_cli("verify " + cert).exit_code == 0);
    std::remove(cert.c_str());
}

TEST_CASE("sequence ordering through the CLI") {
    auto r = run_cli("sequence --group Z7 --set 1,2,4 --mode cycle");
    CHECK(r.exit_code == 0);
    auto j = parse_output(r.stdout_text);
    CHECK(j["render"] == "Z7:[1,2,4]");

    auto absent = run_cli("sequence --group Z4 --set 1,3 --mode path");
    CHECK(absent.exit_code == 1);
}

TEST_CASE("matchable certificates verify") {
    auto r = run_cli("matchable --group Z5 --matrix 1,-1,-1");
    CHECK(r.exit_code == 0);
    std::string cert = std::string(ORTHO_CLI_PATH) + ".match.json";
    std::ofstream f(cert);
    f << r.stdout_text;
    f.close();
    CHECK(run_cli("verify " + cert).exit_code == 0);
    std::remove(cert.c_str());

    CHECK(run_cli("matchable --group Z9 --matrix \"1,1,-1,0;1,-1,0,-1\"").exit_code == 1);
}

TEST_CASE("families subcommand") {
    auto r = run_cli("families --group Z1009 --k 10 --count 1");
    CHECK(r.exit_code == 0);
    auto j = parse_output(r.stdout_text);
    CHECK(j["built"] == true);
    CHECK(j["z_S"] == 2);
    CHECK(j["check"]["pass"] == true);
}

TEST_CASE("absorber subcommand") {
    auto r = run_cli("absorber --group Z11 --k 3 --x 1 --z 2");
    CHECK(r.exit_code == 0);
    auto j = parse_output(r.stdout_text);
    CHECK(j["verified"] == true);
    CHECK(j["reservoir_size"].get<int>() <= 30);
}

TEST_CASE("rmbg subcommand") {
    auto r = run_cli("rmbg --h 4 --beta 1/2 --samples 100");
    CHECK(r.exit_code == 0);
    auto j = parse_output(r.stdout_text);
    CHECK(j["built"] == true);
    CHECK(j["verdict"]["pass"] == true);
    CHECK(j["max_degree"].get<int>() <= 100);
}

TEST_CASE("probe subcommand reports an interval") {
    auto r = run_cli("probe --group Z11 --colors 1,2,4 --pattern path --p 1.0 --trials 10");
    CHECK(r.exit_code == 0);
    auto j = parse_output(r.stdout_text);
    CHECK(j["successes"] == 10);
    CHECK(j["evidence"] == "monte_carlo");
}

TEST_CASE("typicality subcommand") {
    auto r = run_cli("typicality --group Z7 --equation +a+b+c");
    CHECK(r.exit_code == 0);
    auto j = parse_output(r.stdout_text);
    CHECK(j["typical"] == true);
    CHECK(j["min_degree"] == 7);

    auto r2 = run_cli("typicality --group Z7 --equation a-b-c");
    CHECK(r2.exit_code == 0);
}

TEST_CASE("sweep output is deterministic and csv by default") {
    auto a = run_cli("sweep --max-order 7 --seed 0 --jobs 1");
    auto b = run_cli("sweep --max-order 7 --seed 0 --jobs 1");
    CHECK(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(a.stdout_text.find("group,order,k,status") == 0);

    // --jobs changes nothing for Found results
    auto par = run_cli("sweep --max-order 7 --seed 0 --jobs 4");
    CHECK(par.stdout_text == a.stdout_text);
}

TEST_CASE("cycle-type subcommand") {
    auto r = run_cli("cycle-type --group Z7 --cycle-type 1+3^2");
    CHECK(r.exit_code == 0);
    auto j = parse_output(r.stdout_text);
    CHECK(j["cycle_type"] == "1+3^2");
    CHECK(j["verified"] == true);
}

TEST_CASE("output lands in --out files") {
    std::string path = std::string(ORTHO_CLI_PATH) + ".redirect.json";
    auto r = run_cli("hall-paige --group Z7 --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.empty());
    std::ifstream f(path);
    REQUIRE(f.good());
    nlohmann::json j;
    f >> j;
    CHECK(j["hall_paige"] == true);
    std::remove(path.c_str());
}
