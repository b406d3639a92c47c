// Thin typed client over the assessment service HTTP API. All dashboard
// state changes go through these calls; there is no client-only state.

import type {
  Proposal,
  PublisherStats,
  QueueEntry,
  QueueFilters,
  QueueResponse,
  Report,
  Status,
} from './types';

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { 'Content-Type': 'application/json' },
    ...init,
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private baseUrl: string) {}

  async getQueue(filters: QueueFilters = {}): Promise<QueueResponse> {
    const params = new URLSearchParams();
    if (filters.status) params.set('status', filters.status);
    if (filters.publisher) params.set('publisher', filters.publisher);
    if (filters.minPhrases !== undefined) params.set('min_phrases', String(filters.minPhrases));
    const query = params.toString();
    return request(`${this.baseUrl}/queue${query ? `?${query}` : ''}`);
  }

  async getPaper(paperId: string): Promise<QueueEntry> {
    return request(`${this.baseUrl}/papers/${encodeURIComponent(paperId)}`);
  }

  async enqueue(
    paperId: string,
    report: Report,
    publisher = '',
    journal = '',
  ): Promise<QueueEntry> {
    return request(`${this.baseUrl}/papers/${encodeURIComponent(paperId)}/enqueue`, {
      method: 'POST',
      body: JSON.stringify({ report, publisher, journal }),
    });
  }

  async assess(paperId: string, decision: Status, actor: string, note = ''): Promise<QueueEntry> {
    return request(`${this.baseUrl}/papers/${encodeURIComponent(paperId)}/assess`, {
      method: 'POST',
      body: JSON.stringify({ decision, actor, note }),
    });
  }

  async assign(paperId: string, assignee: string, actor: string): Promise<QueueEntry> {
    return request(`${this.baseUrl}/papers/${encodeURIComponent(paperId)}/assign`, {
      method: 'POST',
      body: JSON.stringify({ assignee, actor }),
    });
  }

  async getProposals(): Promise<{ proposals: Proposal[] }> {
    return request(`${this.baseUrl}/fingerprints/proposals`);
  }

  async propose(
    tortured: string,
    expected = '',
    proposer = '',
    evidencePaperIds: string[] = [],
  ): Promise<Proposal> {
    return request(`${this.baseUrl}/fingerprints/proposals`, {
      method: 'POST',
      body: JSON.stringify({
        tortured,
        expected,
        proposer,
        evidence_paper_ids: evidencePaperIds,
      }),
    });
  }

  async promote(proposalId: string, actor: string): Promise<{ promoted: boolean }> {
    return request(
      `${this.baseUrl}/fingerprints/proposals/${encodeURIComponent(proposalId)}/promote`,
      { method: 'POST', body: JSON.stringify({ actor }) },
    );
  }

  async getPublisherStats(): Promise<{ publishers: PublisherStats[] }> {
    return request(`${this.baseUrl}/stats/publishers`);
  }
}
