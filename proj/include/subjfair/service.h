#ifndef SUBJFAIR_SERVICE_H_
#define SUBJFAIR_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "subjfair/dataset.h"
#include "subjfair/json_io.h"
#include "subjfair/judgments.h"
#include "subjfair/pairs.h"

namespace httplib {
class Server;
}

namespace subjfair {

// Session files live under data_dir/session_id:
//   judgments.jsonl  append-only response log
//   results.json     latest sweep, written by `subjfair sweep --session-dir`
struct SessionConfig {
  std::string session_id;
  std::filesystem::path dataset;
  std::string label_column = "label";
  std::uint64_t seed = 0;
  int pairs_per_judge = 50;
  std::filesystem::path data_dir = "sessions";

  // Relative paths resolve against `base`.
  static SessionConfig FromJson(const Json& j,
                                const std::filesystem::path& base = {});
  static SessionConfig Load(const std::filesystem::path& path);
  std::filesystem::path dir() const { return data_dir / session_id; }
};

inline constexpr char kJudgmentLog[] = "judgments.jsonl";
inline constexpr char kResultsFile[] = "results.json";

// The pairs a judge is shown, in presentation order. A pure function of
// (seed, judge_id), so assignments survive restarts without being stored.
std::vector<UnorderedPair> AssignPairs(int n, int count, std::uint64_t seed,
                                       const std::string& judge_id);

// Per-judge number of "same" answers.
std::map<std::string, int> SameCounts(const std::vector<JudgeResponse>& log);

class Session {
 public:
  // Replays the existing log. A torn final line (no newline, unparsable)
  // was never acknowledged and is cut off.
  Session(SessionConfig config, Dataset dataset);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const SessionConfig& config() const { return config_; }
  const Dataset& dataset() const { return dataset_; }

  // Throws InvalidArgument when count is outside [1, pairs_per_judge].
  Json GetPairs(const std::string& judge_id, int count) const;

  // Appends and fsyncs before returning. Throws Unassigned for a pair never
  // shown to the judge and Conflict for a repeat answer.
  void PostJudgment(const JudgeResponse& response);

  std::vector<JudgeResponse> Responses() const;
  // Contents of results.json, or nullopt before any sweep.
  std::optional<Json> Results() const;

 private:
  SessionConfig config_;
  Dataset dataset_;
  mutable std::mutex mu_;
  int fd_ = -1;
  std::vector<JudgeResponse> log_;
  std::set<std::pair<std::string, UnorderedPair>> answered_;
};

class SessionStore {
 public:
  Session& Add(SessionConfig config);
  Session& Find(const std::string& session_id) const;

 private:
  std::map<std::string, std::unique_ptr<Session>> sessions_;
};

// HTTP front end:
//   GET  /api/health
//   GET  /api/sessions/{id}/pairs?judge_id=..&count=..
//   POST /api/sessions/{id}/judgments   {"judge_id", "i", "j", "same"}
//   GET  /api/sessions/{id}/results
// plus static files from ui_dir when given.
class Server {
 public:
  Server(SessionStore& store, std::optional<std::filesystem::path> ui_dir);
  ~Server();

  // Binds, returning the bound port (an ephemeral one when port is 0).
  int Bind(const std::string& host, int port);
  // Serves until Stop.
  void Run();
  void Stop();

 private:
  SessionStore& store_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace subjfair

#endif  // SUBJFAIR_SERVICE_H_
