#include "subjfair/service.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include <httplib.h>

#include "subjfair/digest.h"
#include "subjfair/error.h"

namespace subjfair {
namespace {

// FNV-1a, so judge seeds do not depend on the standard library's hash.
std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void WriteAll(int fd, const std::string& data) {
  std::size_t done = 0;
  while (done < data.size()) {
    const auto w = ::write(fd, data.data() + done, data.size() - done);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("log write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(w);
  }
}

Json PairPayload(const Dataset& ds, const UnorderedPair& p, bool answered) {
  auto record = [&](int row) {
    Json features = Json::object();
    const auto x = ds.row(row);
    for (int f = 0; f < ds.dim(); ++f) features[ds.feature_names()[f]] = x[f];
    return features;
  };
  Json j;
  j["i"] = p.lo;
  j["j"] = p.hi;
  j["answered"] = answered;
  j["left"] = record(p.lo);
  j["right"] = record(p.hi);
  return j;
}

int StatusFor(const std::exception& e) {
  if (dynamic_cast<const NotFound*>(&e)) return 404;
  if (dynamic_cast<const Conflict*>(&e)) return 409;
  if (dynamic_cast<const Unassigned*>(&e)) return 422;
  if (dynamic_cast<const InvalidArgument*>(&e)) return 400;
  return 500;
}

void SendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, const std::exception& e) {
  Json body;
  body["error"] = e.what();
  SendJson(res, StatusFor(e), body);
}

}  // namespace

SessionConfig SessionConfig::FromJson(const Json& j,
                                      const std::filesystem::path& base) {
  SessionConfig c;
  try {
    c.session_id = j.at("session_id").get<std::string>();
    c.dataset = j.at("dataset").get<std::string>();
    c.label_column = j.value("label_column", c.label_column);
    c.seed = j.value("seed", c.seed);
    c.pairs_per_judge = j.value("pairs_per_judge", c.pairs_per_judge);
    c.data_dir = j.value("data_dir", c.data_dir.string());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("session config: ") + e.what());
  }
  if (c.session_id.empty() ||
      c.session_id.find_first_of("/\\.") != std::string::npos) {
    throw InvalidArgument("session config: session_id must be a plain name");
  }
  if (c.pairs_per_judge < 1) {
    throw InvalidArgument("session config: pairs_per_judge must be >= 1");
  }
  if (c.dataset.is_relative()) c.dataset = base / c.dataset;
  if (c.data_dir.is_relative()) c.data_dir = base / c.data_dir;
  return c;
}

SessionConfig SessionConfig::Load(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  return FromJson(j, path.parent_path());
}

std::vector<UnorderedPair> AssignPairs(int n, int count, std::uint64_t seed,
                                       const std::string& judge_id) {
  return SamplePairSequence(n, count, seed ^ Fnv1a(judge_id));
}

std::map<std::string, int> SameCounts(const std::vector<JudgeResponse>& log) {
  std::map<std::string, int> counts;
  for (const auto& r : log) counts[r.judge_id] += r.same ? 1 : 0;
  return counts;
}

Session::Session(SessionConfig config, Dataset dataset)
    : config_(std::move(config)), dataset_(std::move(dataset)) {
  const std::int64_t n = dataset_.size();
  if (config_.pairs_per_judge > n * (n - 1) / 2) {
    throw InvalidArgument("pairs_per_judge exceeds the number of pairs");
  }
  std::filesystem::create_directories(config_.dir());
  const auto path = config_.dir() / kJudgmentLog;
  if (std::filesystem::exists(path)) {
    const auto text = ReadFile(path);
    const auto last_newline = text.rfind('\n');
    const std::size_t complete =
        last_newline == std::string::npos ? 0 : last_newline + 1;
    if (complete < text.size()) std::filesystem::resize_file(path, complete);
    std::size_t start = 0;
    int lineno = 0;
    while (start < complete) {
      const auto end = text.find('\n', start);
      const auto line = text.substr(start, end - start);
      start = end + 1;
      ++lineno;
      if (line.empty()) continue;
      try {
        auto r = ParseJudgmentLine(line);
        answered_.emplace(r.judge_id, UnorderedPair::Of(r.i, r.j));
        log_.push_back(std::move(r));
      } catch (const Error& e) {
        throw Error(path.string() + ":" + std::to_string(lineno) + ": " +
                    e.what());
      }
    }
  }
  fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error("cannot open " + path.string() + ": " + std::strerror(errno));
  }
}

Session::~Session() {
  if (fd_ >= 0) ::close(fd_);
}

Json Session::GetPairs(const std::string& judge_id, int count) const {
  if (judge_id.empty()) throw InvalidArgument("judge_id is required");
  if (count < 1 || count > config_.pairs_per_judge) {
    throw InvalidArgument("count must lie in [1, " +
                          std::to_string(config_.pairs_per_judge) + "]");
  }
  const auto pairs = AssignPairs(dataset_.size(), config_.pairs_per_judge,
                                 config_.seed, judge_id);
  std::lock_guard lock(mu_);
  Json list = Json::array();
  for (int k = 0; k < count; ++k) {
    list.push_back(PairPayload(dataset_, pairs[k],
                               answered_.count({judge_id, pairs[k]}) > 0));
  }
  Json j;
  j["session_id"] = config_.session_id;
  j["judge_id"] = judge_id;
  j["count"] = count;
  j["pairs"] = std::move(list);
  return j;
}

void Session::PostJudgment(const JudgeResponse& response) {
  if (response.judge_id.empty()) throw InvalidArgument("judge_id is required");
  const int n = dataset_.size();
  if (response.i < 0 || response.j < 0 || response.i >= n || response.j >= n ||
      response.i == response.j) {
    throw InvalidArgument("pair indices out of range");
  }
  const auto pair = UnorderedPair::Of(response.i, response.j);
  const auto assigned = AssignPairs(n, config_.pairs_per_judge, config_.seed,
                                    response.judge_id);
  if (std::find(assigned.begin(), assigned.end(), pair) == assigned.end()) {
    throw Unassigned("pair (" + std::to_string(response.i) + ", " +
                     std::to_string(response.j) +
                     ") was not assigned to judge " + response.judge_id);
  }
  std::lock_guard lock(mu_);
  if (answered_.count({response.judge_id, pair})) {
    throw Conflict("judge " + response.judge_id +
                   " already answered this pair");
  }
  WriteAll(fd_, FormatJudgmentLine(response) + "\n");
  if (::fsync(fd_) != 0) {
    throw Error(std::string("log fsync failed: ") + std::strerror(errno));
  }
  answered_.emplace(response.judge_id, pair);
  log_.push_back(response);
}

std::vector<JudgeResponse> Session::Responses() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::optional<Json> Session::Results() const {
  const auto path = config_.dir() / kResultsFile;
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return Json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

Session& SessionStore::Add(SessionConfig config) {
  auto id = config.session_id;
  if (sessions_.count(id)) throw Conflict("duplicate session " + id);
  auto dataset = LoadDataset(config.dataset, config.label_column);
  auto session = std::make_unique<Session>(std::move(config), std::move(dataset));
  return *sessions_.emplace(id, std::move(session)).first->second;
}

Session& SessionStore::Find(const std::string& session_id) const {
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw NotFound("unknown session " + session_id);
  return *it->second;
}

Server::Server(SessionStore& store, std::optional<std::filesystem::path> ui_dir)
    : store_(store), http_(std::make_unique<httplib::Server>()) {
  auto& http = *http_;
  http.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    Json body;
    body["status"] = "ok";
    SendJson(res, 200, body);
  });

  http.Get(R"(/api/sessions/([^/]+)/pairs)",
           [this](const httplib::Request& req, httplib::Response& res) {
             try {
               auto& session = store_.Find(req.matches[1]);
               const auto judge = req.get_param_value("judge_id");
               int count = session.config().pairs_per_judge;
               if (req.has_param("count")) {
                 const auto text = req.get_param_value("count");
                 std::size_t used = 0;
                 try {
                   count = std::stoi(text, &used);
                 } catch (const std::exception&) {
                   used = 0;
                 }
                 if (used == 0 || used != text.size()) {
                   throw InvalidArgument("count must be an integer");
                 }
               }
               SendJson(res, 200, session.GetPairs(judge, count));
             } catch (const std::exception& e) {
               SendError(res, e);
             }
           });

  http.Post(R"(/api/sessions/([^/]+)/judgments)",
            [this](const httplib::Request& req, httplib::Response& res) {
              try {
                auto& session = store_.Find(req.matches[1]);
                const auto response = ParseJudgmentLine(req.body);
                session.PostJudgment(response);
                Json body;
                body["status"] = "recorded";
                body["judge_id"] = response.judge_id;
                body["i"] = response.i;
                body["j"] = response.j;
                SendJson(res, 201, body);
              } catch (const std::exception& e) {
                SendError(res, e);
              }
            });

  http.Get(R"(/api/sessions/([^/]+)/results)",
           [this](const httplib::Request& req, httplib::Response& res) {
             try {
               auto& session = store_.Find(req.matches[1]);
               auto results = session.Results();
               if (!results) throw NotFound("no results");
               SendJson(res, 200, *results);
             } catch (const std::exception& e) {
               SendError(res, e);
             }
           });

  if (ui_dir) {
    if (!std::filesystem::is_directory(*ui_dir)) {
      throw NotFound("ui directory " + ui_dir->string() + " does not exist");
    }
    http.set_mount_point("/", ui_dir->string());
  }
}

Server::~Server() = default;

int Server::Bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = http_->bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!http_->bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port) +
                " (port in use?)");
  }
  return port;
}

void Server::Run() { http_->listen_after_bind(); }

void Server::Stop() { http_->stop(); }

}  // namespace subjfair
