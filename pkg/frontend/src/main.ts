// Single-page triage dashboard. Renders the flagged-paper queue, an
// evidence panel per entry, assessment controls gated by the state
// machine, and the fingerprint proposal workflow. Everything shown is
// taken verbatim from API responses.

import { ApiClient, ApiError } from './api';
import { applyFilters, legalDecisions, sortEntries } from './queue';
import type { Proposal, QueueEntry, QueueFilters, Report, Status } from './types';

const api = new ApiClient('/api');

interface ViewState {
  entries: QueueEntry[];
  proposals: Proposal[];
  filters: QueueFilters;
  selected: string | null;
  actor: string;
}

const state: ViewState = {
  entries: [],
  proposals: [],
  filters: {},
  selected: null,
  actor: 'sleuth',
};

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function escapeHtml(text: string): string {
  const div = document.createElement('div');
  div.textContent = text;
  return div.innerHTML;
}

function showError(message: string): void {
  const banner = el('error-banner');
  banner.textContent = message;
  banner.style.display = 'block';
}

function clearError(): void {
  el('error-banner').style.display = 'none';
}

async function refresh(): Promise<void> {
  try {
    // Fetch unfiltered and project locally; applyFilters mirrors the
    // server's query parameters exactly, so both paths agree.
    const [queue, proposals] = await Promise.all([api.getQueue(), api.getProposals()]);
    state.entries = queue.entries;
    state.proposals = proposals.proposals;
    clearError();
  } catch (err) {
    showError(`service unreachable: ${err instanceof Error ? err.message : String(err)}`);
    return;
  }
  render();
}

function statusBadge(status: Status): string {
  return `<span class="badge status-${status}">${status.replace(/_/g, ' ')}</span>`;
}

function renderQueue(): void {
  const visible = sortEntries(applyFilters(state.entries, state.filters));
  const rows = visible
    .map(
      (entry) => `
      <tr data-paper="${escapeHtml(entry.paper_id)}" class="${entry.paper_id === state.selected ? 'selected' : ''}">
        <td>${escapeHtml(entry.paper_id)}</td>
        <td>${entry.distinct_fingerprints}</td>
        <td>${statusBadge(entry.status)}</td>
        <td>${escapeHtml(entry.publisher)}</td>
        <td>${escapeHtml(entry.journal)}</td>
        <td>${entry.assignee ? escapeHtml(entry.assignee) : '—'}</td>
      </tr>`,
    )
    .join('');
  el('queue-body').innerHTML =
    rows || '<tr><td colspan="6" class="empty">no entries match the current filters</td></tr>';
  el('queue-count').textContent = `${visible.length} of ${state.entries.length}`;

  for (const row of document.querySelectorAll<HTMLTableRowElement>('#queue-body tr[data-paper]')) {
    row.onclick = () => {
      state.selected = row.dataset.paper ?? null;
      render();
    };
  }
}

function renderReport(report: Report): string {
  if (report.kind === 'screening') {
    const matches = (report.matches ?? []) as { fingerprint_id?: string; snippet?: string }[];
    const snippets = matches
      .map(
        (m) =>
          `<li><code>${escapeHtml(m.fingerprint_id ?? '')}</code> ${escapeHtml(m.snippet ?? '')}</li>`,
      )
      .join('');
    return `<div class="report">
      <strong>screening</strong> — ${report.distinct_fingerprints ?? 0} distinct phrases,
      severity ${escapeHtml(String(report.severity ?? ''))}
      <ul>${snippets}</ul>
    </div>`;
  }
  return `<div class="report"><strong>${escapeHtml(report.kind)}</strong> — verdict ${escapeHtml(
    String(report.verdict ?? ''),
  )}</div>`;
}

function renderEvidence(): void {
  const panel = el('evidence-panel');
  const entry = state.entries.find((e) => e.paper_id === state.selected);
  if (!entry) {
    panel.innerHTML = '<p class="empty">select a queue entry to inspect its evidence</p>';
    return;
  }
  const decisions = legalDecisions(entry.status);
  const buttons = decisions
    .map(
      (d) =>
        `<button class="assess-btn" data-decision="${d}">${d.replace(/_/g, ' ')}</button>`,
    )
    .join('');
  panel.innerHTML = `
    <h3>${escapeHtml(entry.paper_id)} ${statusBadge(entry.status)}</h3>
    <p>${escapeHtml(entry.publisher)} / ${escapeHtml(entry.journal)}</p>
    ${entry.reports.map(renderReport).join('')}
    ${entry.notes.length ? `<p>notes: ${entry.notes.map(escapeHtml).join('; ')}</p>` : ''}
    <div class="assess-actions">
      ${buttons || '<span class="empty">terminal status: no further decisions</span>'}
    </div>`;

  for (const btn of panel.querySelectorAll<HTMLButtonElement>('.assess-btn')) {
    btn.onclick = () => void submitAssessment(entry.paper_id, btn.dataset.decision as Status);
  }
}

async function submitAssessment(paperId: string, decision: Status): Promise<void> {
  try {
    const updated = await api.assess(paperId, decision, state.actor);
    state.entries = state.entries.map((e) => (e.paper_id === paperId ? updated : e));
    clearError();
    render();
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      // status changed server-side since the page rendered: reconcile
      showError(`status changed on the server (${err.detail}); refreshing`);
      await refresh();
    } else {
      showError(err instanceof Error ? err.message : String(err));
    }
  }
}

function renderProposals(): void {
  const list = state.proposals
    .map(
      (p) => `
      <li>
        <code>${escapeHtml(p.tortured)}</code> → ${escapeHtml(p.expected || '?')}
        <span class="badge state-${p.state}">${p.state}</span>
        ${
          p.state === 'proposed'
            ? `<button class="promote-btn" data-proposal="${escapeHtml(p.proposal_id)}">promote</button>`
            : ''
        }
      </li>`,
    )
    .join('');
  el('proposal-list').innerHTML = list || '<li class="empty">no proposals yet</li>';

  for (const btn of document.querySelectorAll<HTMLButtonElement>('.promote-btn')) {
    btn.onclick = async () => {
      try {
        await api.promote(btn.dataset.proposal ?? '', state.actor);
        clearError();
        await refresh();
      } catch (err) {
        showError(err instanceof Error ? err.message : String(err));
      }
    };
  }
}

function render(): void {
  renderQueue();
  renderEvidence();
  renderProposals();
}

function bindControls(): void {
  const statusSelect = el('filter-status') as HTMLSelectElement;
  const publisherInput = el('filter-publisher') as HTMLInputElement;
  const minPhrasesInput = el('filter-min-phrases') as HTMLInputElement;
  const update = () => {
    state.filters = {
      status: (statusSelect.value || undefined) as Status | undefined,
      publisher: publisherInput.value || undefined,
      minPhrases: minPhrasesInput.value ? Number(minPhrasesInput.value) : undefined,
    };
    render();
  };
  statusSelect.onchange = update;
  publisherInput.oninput = update;
  minPhrasesInput.oninput = update;

  (el('proposal-form') as HTMLFormElement).onsubmit = async (event) => {
    event.preventDefault();
    const tortured = (el('proposal-tortured') as HTMLInputElement).value.trim();
    const expected = (el('proposal-expected') as HTMLInputElement).value.trim();
    if (!tortured) return;
    try {
      await api.propose(tortured, expected, state.actor);
      (el('proposal-form') as HTMLFormElement).reset();
      clearError();
      await refresh();
    } catch (err) {
      if (err instanceof ApiError) {
        showError(err.detail); // e.g. duplicate phrase
      } else {
        showError(err instanceof Error ? err.message : String(err));
      }
    }
  };
}

if (typeof document !== 'undefined' && document.getElementById('queue-body')) {
  bindControls();
  void refresh();
}
