#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "ansatz.hpp"
#include "net.hpp"
#include "pauli.hpp"
#include "protocol.hpp"
#include "statevector.hpp"

namespace parvqe {

/// Single-job-at-a-time compute server. State between jobs is only the loaded
/// problem (Hamiltonian + ansatz circuit). Runs until a Shutdown request.
class WorkerServer {
  public:
    WorkerServer(const std::string& host, uint16_t port) : listener_(host, port) {}

    uint16_t port() const { return listener_.port(); }

    void run() {
        bool shutdown = false;
        while (!shutdown) {
            TcpStream conn = listener_.accept();
            try {
                shutdown = serve_connection(conn);
            } catch (const std::exception&) {
                // Protocol or transport error: drop the connection, stay alive.
            }
        }
    }

  private:
    bool serve_connection(TcpStream& conn) {
        while (true) {
            uint8_t header[kFrameHeaderSize];
            if (!conn.recv_all(header, kFrameHeaderSize)) return false;  // clean disconnect
            DecodeOutcome probe = decode_frame(header, kFrameHeaderSize);
            if (probe.error != FrameError::None && probe.error != FrameError::NeedMoreData)
                throw std::runtime_error(std::string("protocol error: ") +
                                         frame_error_name(probe.error));
            uint32_t payload_len = (uint32_t(header[4]) << 24) | (uint32_t(header[5]) << 16) |
                                   (uint32_t(header[6]) << 8) | uint32_t(header[7]);
            std::vector<uint8_t> frame(header, header + kFrameHeaderSize);
            frame.resize(kFrameHeaderSize + payload_len);
            if (payload_len > 0 && !conn.recv_all(frame.data() + kFrameHeaderSize, payload_len))
                throw std::runtime_error("protocol error: truncated payload");
            DecodeOutcome outcome = decode_frame(frame);
            if (outcome.error != FrameError::None)
                throw std::runtime_error(std::string("protocol error: ") +
                                         frame_error_name(outcome.error));
            if (!std::holds_alternative<JobRequest>(outcome.message))
                throw std::runtime_error("protocol error: worker expects requests");
            const auto& req = std::get<JobRequest>(outcome.message);
            JobResult res = execute(req);
            conn.send_all(encode_frame(res));
            if (req.kind == JobKind::Shutdown) return true;
        }
    }

    JobResult execute(const JobRequest& req) {
        JobResult res;
        res.job_id = req.job_id;
        res.kind = req.kind;
        switch (req.kind) {
        case JobKind::Ping:
        case JobKind::Shutdown:
            break;
        case JobKind::LoadProblem:
            try {
                hamiltonian_ = parse_hamiltonian(req.problem_hamiltonian);
                circuit_ = parse_circuit(req.problem_circuit);
            } catch (const std::exception&) {
                hamiltonian_.reset();
                circuit_.reset();
                res.status = JobStatus::BadRequest;
            }
            break;
        case JobKind::EvaluateEnergy:
        case JobKind::EvaluateBatchElement:
            if (!hamiltonian_ || !circuit_) {
                res.status = JobStatus::NoProblemLoaded;
                break;
            }
            try {
                StateVector psi = prepare_state(*circuit_, req.theta);
                res.energy = psi.expectation_hamiltonian(*hamiltonian_);
            } catch (const std::exception&) {
                res.status = JobStatus::EvaluationFailed;
            }
            break;
        }
        return res;
    }

    TcpListener listener_;
    std::optional<QubitHamiltonian> hamiltonian_;
    std::optional<AnsatzCircuit> circuit_;
};

/// Blocking worker entry point; serves until Shutdown.
inline void serve_worker(const std::string& host, uint16_t port) {
    WorkerServer server(host, port);
    server.run();
}

}  // namespace parvqe
