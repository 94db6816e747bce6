#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "net.hpp"
#include "optimizer.hpp"
#include "protocol.hpp"

namespace parvqe {

struct DispatchError : std::runtime_error {
    uint64_t job_id;
    explicit DispatchError(uint64_t id, const std::string& what)
        : std::runtime_error(what + " (job " + std::to_string(id) + ")"), job_id(id) {}
};

enum class WorkerState { Idle, Busy, Failed };

/// One coordinator-side connection; one in-flight job at a time.
class WorkerClient {
  public:
    WorkerClient(Endpoint endpoint, uint64_t partition_group_size = 1)
        : endpoint_(std::move(endpoint)), partition_group_(partition_group_size) {}

    const Endpoint& endpoint() const { return endpoint_; }
    uint64_t partition_group_size() const { return partition_group_; }
    WorkerState state() const { return state_; }
    void mark_failed() { state_ = WorkerState::Failed; }

    void connect() {
        stream_ = TcpStream::connect(endpoint_.host, endpoint_.port);
        state_ = WorkerState::Idle;
    }

    /// Synchronous request/response on this connection. Transport failures
    /// mark the worker failed and rethrow.
    JobResult call(const JobRequest& req) {
        if (state_ == WorkerState::Failed || !stream_.valid())
            throw std::runtime_error("worker not available");
        state_ = WorkerState::Busy;
        try {
            stream_.send_all(encode_frame(req));
            uint8_t header[kFrameHeaderSize];
            if (!stream_.recv_all(header, kFrameHeaderSize))
                throw std::runtime_error("worker closed connection");
            uint32_t payload_len = (uint32_t(header[4]) << 24) | (uint32_t(header[5]) << 16) |
                                   (uint32_t(header[6]) << 8) | uint32_t(header[7]);
            std::vector<uint8_t> frame(header, header + kFrameHeaderSize);
            frame.resize(kFrameHeaderSize + payload_len);
            if (payload_len > 0 && !stream_.recv_all(frame.data() + kFrameHeaderSize, payload_len))
                throw std::runtime_error("truncated result frame");
            DecodeOutcome outcome = decode_frame(frame);
            if (outcome.error != FrameError::None ||
                !std::holds_alternative<JobResult>(outcome.message))
                throw std::runtime_error("bad result frame");
            state_ = WorkerState::Idle;
            return std::get<JobResult>(outcome.message);
        } catch (...) {
            state_ = WorkerState::Failed;
            stream_.close();
            throw;
        }
    }

  private:
    Endpoint endpoint_;
    uint64_t partition_group_;
    TcpStream stream_;
    WorkerState state_ = WorkerState::Failed;  // until connected
};

class WorkerRegistry {
  public:
    void add(Endpoint endpoint, uint64_t partition_group_size = 1) {
        workers_.emplace_back(std::move(endpoint), partition_group_size);
    }

    void connect_all() {
        for (auto& w : workers_) w.connect();
    }

    size_t live_count() const {
        return static_cast<size_t>(std::count_if(workers_.begin(), workers_.end(), [](const auto& w) {
            return w.state() != WorkerState::Failed;
        }));
    }

    std::vector<WorkerClient>& workers() { return workers_; }

    uint64_t total_nodes() const {
        uint64_t n = 0;
        for (const auto& w : workers_) n += w.partition_group_size();
        return n;
    }

    /// Send the problem to every live worker; raises on any rejection.
    void load_problem(const std::string& hamiltonian_text, const std::string& circuit_text) {
        JobRequest req;
        req.kind = JobKind::LoadProblem;
        req.problem_hamiltonian = hamiltonian_text;
        req.problem_circuit = circuit_text;
        for (auto& w : workers_) {
            if (w.state() == WorkerState::Failed) continue;
            JobResult res = w.call(req);
            if (res.status != JobStatus::Ok)
                throw std::runtime_error("worker rejected problem load");
        }
    }

    void shutdown_all() {
        JobRequest req;
        req.kind = JobKind::Shutdown;
        for (auto& w : workers_) {
            if (w.state() == WorkerState::Failed) continue;
            try {
                w.call(req);
            } catch (const std::exception&) {
            }
        }
    }

  private:
    std::vector<WorkerClient> workers_;
};

/// Greedy pull-based dispatch: each live worker drains a shared queue. A
/// transport-failed worker's job is reassigned once; a second failure or any
/// nonzero result status fails the batch. Results return ordered by job_id.
inline std::vector<JobResult> dispatch_batch(WorkerRegistry& registry,
                                             const std::vector<JobRequest>& jobs) {
    if (registry.live_count() == 0) throw std::runtime_error("dispatch_batch: no live workers");
    if (jobs.empty()) return {};

    struct QueuedJob {
        size_t index;
        bool retried;
    };
    std::mutex mu;
    std::deque<QueuedJob> queue;
    for (size_t i = 0; i < jobs.size(); ++i) queue.push_back({i, false});
    std::map<uint64_t, JobResult> results;
    std::vector<std::pair<uint64_t, std::string>> failures;

    auto run_worker = [&](WorkerClient& worker) {
        while (true) {
            QueuedJob job;
            {
                std::lock_guard lock(mu);
                if (!failures.empty() || queue.empty()) return;
                job = queue.front();
                queue.pop_front();
            }
            JobResult res;
            try {
                res = worker.call(jobs[job.index]);
            } catch (const std::exception& e) {
                std::lock_guard lock(mu);
                if (job.retried)
                    failures.emplace_back(jobs[job.index].job_id,
                                          std::string("failed twice: ") + e.what());
                else
                    queue.push_back({job.index, true});
                return;  // worker is dead
            }
            std::lock_guard lock(mu);
            if (res.status != JobStatus::Ok) {
                failures.emplace_back(res.job_id,
                                      "returned status " + std::to_string(int(res.status)));
                return;
            }
            results[res.job_id] = res;
        }
    };

    std::vector<std::thread> threads;
    for (auto& w : registry.workers())
        if (w.state() != WorkerState::Failed)
            threads.emplace_back(run_worker, std::ref(w));
    for (auto& t : threads) t.join();

    // Retried jobs may still be queued if every worker died first.
    if (failures.empty() && !queue.empty()) {
        for (auto& w : registry.workers())
            if (w.state() != WorkerState::Failed) {
                run_worker(w);
                if (queue.empty() || !failures.empty()) break;
            }
        if (failures.empty() && !queue.empty())
            failures.emplace_back(jobs[queue.front().index].job_id,
                                  "unassigned: all workers failed");
    }

    if (!failures.empty())
        throw DispatchError(failures.front().first,
                            "dispatch_batch failed: " + failures.front().second);
    if (results.size() != jobs.size())
        throw std::runtime_error("dispatch_batch: request/result mismatch");
    std::vector<JobResult> ordered;
    ordered.reserve(results.size());
    for (auto& [id, res] : results) ordered.push_back(res);
    return ordered;
}

/// Executor backed by the worker farm: every batch element becomes an
/// EvaluateBatchElement job.
class RemoteExecutor : public Executor {
  public:
    explicit RemoteExecutor(WorkerRegistry& registry) : registry_(registry) {}

    std::vector<double> evaluate_batch(const std::vector<std::vector<double>>& thetas) override {
        std::vector<JobRequest> jobs;
        jobs.reserve(thetas.size());
        for (size_t i = 0; i < thetas.size(); ++i) {
            JobRequest req;
            req.job_id = next_id_++;
            req.kind = thetas.size() == 1 ? JobKind::EvaluateEnergy : JobKind::EvaluateBatchElement;
            req.theta = thetas[i];
            jobs.push_back(std::move(req));
        }
        std::vector<JobResult> results = dispatch_batch(registry_, jobs);
        std::vector<double> energies;
        energies.reserve(results.size());
        for (const auto& r : results) energies.push_back(r.energy);
        return energies;
    }

  private:
    WorkerRegistry& registry_;
    uint64_t next_id_ = 1;
};

}  // namespace parvqe
