#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "sdtk_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

Run run_cli(const std::string& args) {
    const auto err = workdir() / "stderr.txt";
    const std::string cmd = std::string("\"") + SDTK_CLI_PATH + "\" " + args + " 2>\"" + err.string() + "\"";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

std::string p(const fs::path& f) { return "\"" + f.string() + "\""; }

}  // namespace

TEST_CASE("cluster and score an embedding fixture") {
    const auto emb = workdir() / "emb.csv", ref = workdir() / "ref.rttm";
    REQUIRE(run_cli("fixtures --kind embeddings --seed 1 -o " + p(emb) + " --ref-output " + p(ref)).code == 0);
    for (std::string method : {"ahc", "kmeans", "sc-fixed", "sc-adapt", "sc-pna", "sc-mk"}) {
        const auto hyp = workdir() / (method + ".rttm");
        auto c = run_cli("cluster -i " + p(emb) + " --method " + method + " -o " + p(hyp));
        REQUIRE(c.code == 0);
        auto s = run_cli("score --ref " + p(ref) + " --hyp " + p(hyp) + " --no-per-file");
        REQUIRE(s.code == 0);
        CHECK(s.out.find("TOTAL,") != std::string::npos);
        CHECK(s.out.substr(s.out.rfind(',') + 1) == "0.000000\n");
    }
}

TEST_CASE("cluster output is deterministic") {
    const auto emb = workdir() / "emb2.csv";
    REQUIRE(run_cli("fixtures --kind embeddings --seed 2 -o " + p(emb)).code == 0);
    auto a = run_cli("cluster -i " + p(emb) + " --method sc-pna --window 29 --seed 5");
    auto b = run_cli("cluster -i " + p(emb) + " --method sc-pna --window 29 --seed 5 --jobs 3");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
}

TEST_CASE("score reports the truncated fixture") {
    const auto ref = workdir() / "r.rttm", hyp = workdir() / "h.rttm";
    spit(ref, "SPEAKER f 1 0.000 10.000 <NA> <NA> spkA <NA> <NA>\n");
    spit(hyp, "SPEAKER f 1 0.000 8.000 <NA> <NA> spkA <NA> <NA>\n");
    auto s = run_cli("score --ref " + p(ref) + " --hyp " + p(hyp));
    REQUIRE(s.code == 0);
    CHECK(s.out == "recording_id,ref_speech,missed,false_alarm,confusion,der\n"
                   "f,10.000,2.000,0.000,0.000,0.200000\n"
                   "TOTAL,10.000,2.000,0.000,0.000,0.200000\n");
    CHECK(s.err.empty());
}

TEST_CASE("missing hypothesis warns on stderr only") {
    const auto ref = workdir() / "r2.rttm", hyp = workdir() / "h2.rttm";
    spit(ref, "SPEAKER f 1 0.000 10.000 <NA> <NA> a <NA> <NA>\nSPEAKER g 1 0.000 10.000 <NA> <NA> a <NA> <NA>\n");
    spit(hyp, "SPEAKER f 1 0.000 10.000 <NA> <NA> a <NA> <NA>\n");
    auto s = run_cli("score --ref " + p(ref) + " --hyp " + p(hyp));
    CHECK(s.code == 0);
    CHECK(s.err.find("g") != std::string::npos);
    CHECK(s.out.find("g,10.000,10.000,0.000,0.000,1.000000") != std::string::npos);
}

TEST_CASE("usage and fatal errors set the exit code") {
    const auto rttm = workdir() / "ok.rttm", bad = workdir() / "bad.rttm";
    spit(rttm, "SPEAKER f 1 0.000 1.000 <NA> <NA> a <NA> <NA>\n");
    spit(bad, "SPEAKER f 1 0.000\n");
    CHECK(run_cli("smooth -i " + p(rttm) + " --window 4").code == 2);
    CHECK(run_cli("cluster -i " + p(workdir() / "emb.csv") + " --window 4").code == 2);
    auto parse = run_cli("smooth -i " + p(bad));
    CHECK(parse.code == 1);
    CHECK(parse.err.find("line 1") != std::string::npos);
    CHECK(run_cli("score --ref " + p(workdir() / "nope.rttm") + " --hyp " + p(rttm)).code == 1);
    CHECK(run_cli("cluster -i " + p(workdir() / "nope.csv")).code != 0);
    CHECK(run_cli("frobnicate").code != 0);
}

TEST_CASE("smooth window one is identity and config files supply flags") {
    const auto rttm = workdir() / "s.rttm", cfg = workdir() / "smooth.ini";
    const std::string text = "SPEAKER f 1 0.000 1.500 <NA> <NA> a <NA> <NA>\nSPEAKER f 1 1.500 0.050 <NA> <NA> b <NA> <NA>\n"
                             "SPEAKER f 1 1.550 2.000 <NA> <NA> a <NA> <NA>\n";
    spit(rttm, text);
    auto id = run_cli("smooth -i " + p(rttm) + " --window 1");
    REQUIRE(id.code == 0);
    CHECK(id.out == text);
    spit(cfg, "window = 29\n");
    auto viaconfig = run_cli("smooth -i " + p(rttm) + " --config " + p(cfg));
    auto direct = run_cli("smooth -i " + p(rttm) + " --window 29");
    CHECK(viaconfig.out == direct.out);
    CHECK(direct.out == "SPEAKER f 1 0.000 3.550 <NA> <NA> a <NA> <NA>\n");
    auto flag_wins = run_cli("smooth -i " + p(rttm) + " --config " + p(cfg) + " --window 1");
    CHECK(flag_wins.out == text);
}

TEST_CASE("compare and stats") {
    const auto ref = workdir() / "cr.rttm", a = workdir() / "ca.rttm", b = workdir() / "cb.rttm";
    spit(ref, "SPEAKER f1 1 0 10 <NA> <NA> x <NA> <NA>\nSPEAKER f2 1 0 10 <NA> <NA> x <NA> <NA>\n");
    spit(a, "SPEAKER f1 1 0 7 <NA> <NA> x <NA> <NA>\nSPEAKER f2 1 0 9 <NA> <NA> x <NA> <NA>\n");
    spit(b, "SPEAKER f1 1 0 9 <NA> <NA> x <NA> <NA>\nSPEAKER f2 1 0 8 <NA> <NA> x <NA> <NA>\n");
    auto c = run_cli("compare --ref " + p(ref) + " --hyp-a " + p(a) + " --hyp-b " + p(b));
    REQUIRE(c.code == 0);
    CHECK(c.out.rfind("recording_id,der_a,der_b,delta\nf1,", 0) == 0);
    auto ex = run_cli("compare --ref " + p(ref) + " --hyp-a " + p(a) + " --hyp-b " + p(b) + " --exclude f1");
    CHECK(ex.out.find("f1") == std::string::npos);
    spit(b, "SPEAKER f1 1 0 9 <NA> <NA> x <NA> <NA>\n");
    auto miss = run_cli("compare --ref " + p(ref) + " --hyp-a " + p(a) + " --hyp-b " + p(b));
    CHECK(miss.code == 1);
    CHECK(miss.err.find("f2") != std::string::npos);

    const auto tl = workdir() / "conv.rttm";
    REQUIRE(run_cli("fixtures --kind timeline --seed 4 -o " + p(tl)).code == 0);
    auto st = run_cli("stats --rttm " + p(tl));
    REQUIRE(st.code == 0);
    CHECK(st.out.find("conversation,") != std::string::npos);
    CHECK(st.out.find("\n\n") != std::string::npos);
}
