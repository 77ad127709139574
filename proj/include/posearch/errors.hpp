#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace posearch {

struct IndexOutOfRange : std::out_of_range {
    IndexOutOfRange(int index, int n)
        : std::out_of_range("element index " + std::to_string(index) +
                            " outside 1.." + std::to_string(n)),
          index(index),
          n(n) {}
    int index, n;
};

struct CycleDetected : std::runtime_error {
    explicit CycleDetected(std::vector<int> witness)
        : std::runtime_error(describe(witness)), cycle(std::move(witness)) {}
    std::vector<int> cycle;

private:
    static std::string describe(const std::vector<int>& c) {
        std::string s = "order relation contains a cycle:";
        for (int v : c) s += " " + std::to_string(v);
        return s;
    }
};

struct ParseError : std::runtime_error {
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line(line) {}
    int line;
};

struct InconsistentVirtualQuery : std::runtime_error {
    InconsistentVirtualQuery(const std::string& what, int a, int b)
        : std::runtime_error("inconsistent virtual query: " + what +
                             " (witness " + std::to_string(a) + ", " +
                             std::to_string(b) + ")"),
          a(a),
          b(b) {}
    int a, b;
};

struct MissingTopOrBottom : std::runtime_error {
    MissingTopOrBottom() : std::runtime_error("dataset needs both a top and a bottom element") {}
};

struct TopEqualsBottom : std::runtime_error {
    TopEqualsBottom() : std::runtime_error("top and bottom must be distinct") {}
};

struct NotATree : std::runtime_error {
    NotATree() : std::runtime_error("poset is not tree-like") {}
};

struct LevelOutOfRange : std::runtime_error {
    explicit LevelOutOfRange(int level)
        : std::runtime_error("chain level " + std::to_string(level) + " out of range"),
          level(level) {}
    int level;
};

struct InvalidWorkerCount : std::runtime_error {
    explicit InvalidWorkerCount(int m)
        : std::runtime_error("parallel search needs at least 2 workers, got " + std::to_string(m)),
          m(m) {}
    int m;
};

struct MalformedSchedule : std::runtime_error {
    explicit MalformedSchedule(const std::string& what)
        : std::runtime_error("malformed schedule: " + what) {}
};

struct MalformedGraph : std::runtime_error {
    explicit MalformedGraph(const std::string& what)
        : std::runtime_error("malformed conceptual graph: " + what) {}
};

struct BadParams : std::runtime_error {
    explicit BadParams(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace posearch
