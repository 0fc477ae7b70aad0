// Black-box checks of the command-line binary: exit codes, report files,
// byte determinism. Drives the real executable through a shell.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout and stderr interleaved
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) {
        check(false, "popen: " + cmd);
        return r;
    }
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return "<missing>";
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

int main() {
    const std::string bin = "'" CRITLINE_BIN "'";

    char dir_template[] = "/tmp/critline_cli_XXXXXX";
    const char* dir_c = mkdtemp(dir_template);
    if (!dir_c) {
        std::printf("[FAIL] cannot create scratch directory\n");
        return 1;
    }
    const std::string dir = dir_c;

    RunResult r = run(bin + " eval zeta 2");
    check(r.exit_code == 0, "eval zeta 2 exits 0");
    check(contains(r.output, "value: 1.64493406684822"), "eval zeta 2 prints the value");
    check(contains(r.output, "abs_err:"), "eval zeta 2 prints the error bound");

    r = run(bin + " eval zeta 1");
    check(r.exit_code == 2, "eval zeta 1 exits 2");
    check(contains(r.output, "pole"), "eval zeta 1 names the pole");

    r = run(bin + " eval zeta banana");
    check(r.exit_code == 1, "eval zeta banana exits 1");
    check(contains(r.output, "banana"), "parse error names the bad token");

    r = run(bin + " eval F 2+3i");
    check(r.exit_code == 1, "eval F rejects a complex ordinate");

    r = run(bin + " eval L 0.5+2i --q 4 --label 2");
    check(r.exit_code == 0, "eval L with explicit character exits 0");

    r = run(bin + " eval epstein 0.8 --form 1 0 1 --radius 50");
    check(r.exit_code == 2, "direct lattice sum outside its region exits 2");

    r = run(bin + " zeros 0");
    check(r.exit_code == 1, "zeros 0 exits 1");

    const std::string zpath = dir + "/z.txt";
    r = run(bin + " zeros 3 --out '" + zpath + "'");
    check(r.exit_code == 0, "zeros 3 exits 0");
    std::string zfile = slurp(zpath);
    {
        std::vector<double> ts;
        std::size_t lines = 0, start = 0;
        while (start < zfile.size()) {
            std::size_t nl = zfile.find('\n', start);
            if (nl == std::string::npos) break;
            std::string line = zfile.substr(start, nl - start);
            long idx = 0;
            double t = 0, tol = 0;
            if (std::sscanf(line.c_str(), "%ld %lf %lf", &idx, &t, &tol) == 3) ts.push_back(t);
            ++lines;
            start = nl + 1;
        }
        check(lines == 3 && ts.size() == 3, "zeros file has one line per ordinate");
        check(ts.size() == 3 && ts[0] < ts[1] && ts[1] < ts[2], "ordinates increase");
        check(ts.size() == 3 && std::abs(ts[0] - 14.134725) < 1e-5,
              "first ordinate matches the known value");
    }
    run(bin + " zeros 3 --out '" + zpath + ".again'");
    check(zfile == slurp(zpath + ".again"), "zeros re-run is byte-identical");

    r = run(bin + " zeros 3 --out /no/such/dir/z.txt");
    check(r.exit_code == 3, "unwritable zeros path exits 3");

    r = run("cd '" + dir + "' && CRITLINE_ZEROS=env_zeros.txt " + bin + " zeros 3");
    check(r.exit_code == 0 && slurp(dir + "/env_zeros.txt") == zfile,
          "CRITLINE_ZEROS names the default output file");

    r = run(bin + " audit nonsense");
    check(r.exit_code == 1, "unknown audit target exits 1");

    r = run(bin + " audit functional-zeta --tol banana=1");
    check(r.exit_code == 1, "unknown tolerance override exits 1");

    r = run(bin + " audit functional-zeta --tol fe_zeta=oops");
    check(r.exit_code == 1, "malformed tolerance value exits 1");

    const std::string fz = dir + "/fz.csv";
    r = run(bin + " audit functional-zeta --out '" + fz + "'");
    check(r.exit_code == 0, "audit functional-zeta exits 0");
    check(contains(r.output, "pass"), "audit summary reports pass");
    std::string fz_bytes = slurp(fz);
    check(fz_bytes.rfind("sigma,t,residual,finding\n", 0) == 0,
          "reflection-residual report has the expected header");
    check(slurp(fz + ".meta") != "<missing>", "metadata sidecar exists");
    run(bin + " audit functional-zeta --out '" + fz + ".again' --threads 3");
    check(fz_bytes == slurp(fz + ".again"),
          "audit report is byte-identical across runs and thread counts");

    r = run(bin + " audit functional-zeta --tol fe_zeta=1e-30");
    check(r.exit_code == 4, "impossible tolerance gates to exit 4");
    check(contains(r.output, "FAIL"), "gated failure is reported in the summary");

    const std::string fzj = dir + "/fz.jsonl";
    r = run(bin + " audit functional-zeta --out '" + fzj + "' --format json");
    check(r.exit_code == 0, "json report format accepted");
    std::string fzj_bytes = slurp(fzj);
    check(fzj_bytes.rfind("{\"sigma\":", 0) == 0, "json report starts with a row object");

    r = run(bin + " audit principal-identity --q 6");
    check(r.exit_code == 0, "audit principal-identity --q 6 exits 0");
    check(contains(r.output, "finding"), "printed-form rows are reported as findings");

    const std::string shortz = dir + "/short.txt";
    run(bin + " zeros 5 --out '" + shortz + "'");
    r = run(bin + " audit hadamard --zeros-file '" + shortz + "'");
    check(r.exit_code == 2, "hadamard audit with too few ordinates exits 2");

    r = run(bin + " characters --q 4");
    check(r.exit_code == 0, "characters --q 4 exits 0");
    check(r.output.rfind("[{", 0) == 0 && contains(r.output, "\"q\":4") &&
              contains(r.output, "\"primitive\":true"),
          "character dump is a JSON array with a primitive entry");

    r = run(bin + " characters --q 0");
    check(r.exit_code == 1, "characters --q 0 exits 1");

    const std::string ev = dir + "/ev.json";
    r = run(bin + " eval zeta 0.5+14i --out '" + ev + "' --format json");
    check(r.exit_code == 0, "eval with a report path exits 0");
    check(contains(slurp(ev), "\"function\":\"zeta\""), "eval report carries the function name");

    std::printf("%s: %d failure(s)\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
